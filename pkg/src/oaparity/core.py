"""Permutations, finite fields, Latin squares and orthogonal arrays.

Conventions used throughout the package:

* symbols are 0-based: the alphabet of size n is [0, n-1];
* columns of an orthogonal array are 1-based, matching the usual
  indexing of column pairs and triples in the combinatorics literature;
* an OA(k, n) is stored with its n^2 rows sorted lexicographically, so
  the row whose first two entries are (u, v) sits at position u*n + v.
  Every pair of columns of a valid array contains every ordered symbol
  pair exactly once, hence the first two columns of the sorted storage
  enumerate [0,n-1]^2 in order.

All values are immutable after construction and all operations are pure
functions, so everything here is safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class OAError(ValueError):
    """Invalid square/array data, or an operation applied out of domain."""


class OrthogonalityError(OAError):
    """A pair of columns (or squares) repeats an ordered symbol pair."""

    def __init__(self, msg: str, pair=None, repeated=None):
        super().__init__(msg)
        self.pair = pair          # offending pair of columns or square indices
        self.repeated = repeated  # a repeated ordered symbol pair


class ResourceLimitError(OAError):
    """An enumeration exceeded its configured memory budget."""


# ---------------------------------------------------------------------------
# permutations


def is_permutation(images) -> bool:
    seq = list(images)
    return sorted(seq) == list(range(len(seq)))


def permutation_parity(images) -> int:
    """Parity bit of a permutation given as the tuple of images of 0..n-1.

    Returns 0 for even, 1 for odd, computed as (n - number of cycles) mod 2.
    Input is assumed to be a valid permutation.
    """
    imgs = [int(x) for x in images]
    n = len(imgs)
    seen = bytearray(n)
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = 1
            j = imgs[j]
    return (n - cycles) & 1


def parity_batch(perms: np.ndarray) -> np.ndarray:
    """Parity bits of many permutations at once, by inversion counting.

    ``perms`` has shape (m, n), each row a permutation of 0..n-1.  This is
    deliberately a different algorithm from ``permutation_parity`` (which
    counts cycles); the test suite cross-checks the two.
    """
    perms = np.asarray(perms)
    if perms.ndim != 2:
        raise OAError("parity_batch expects a 2-d array of permutations")
    m, n = perms.shape
    out = np.empty(m, dtype=np.uint8)
    iu, ju = np.triu_indices(n, 1)
    # chunk so the (chunk, n*(n-1)/2) comparison table stays modest
    chunk = max(1, (1 << 22) // max(1, len(iu)))
    for lo in range(0, m, chunk):
        block = perms[lo:lo + chunk]
        inv = (block[:, iu] > block[:, ju]).sum(axis=1)
        out[lo:lo + chunk] = inv & 1
    return out


# ---------------------------------------------------------------------------
# finite fields GF(q), q = p^e <= 32

# fixed irreducible polynomial per extension field, coefficients ascending
# degree and monic; any irreducible choice gives an isomorphic field, fixing
# one makes every construction bit-reproducible
_IRREDUCIBLE = {
    4: (1, 1, 1),            # x^2 + x + 1 over GF(2)
    8: (1, 1, 0, 1),         # x^3 + x + 1 over GF(2)
    9: (1, 0, 1),            # x^2 + 1 over GF(3)
    16: (1, 1, 0, 0, 1),     # x^4 + x + 1 over GF(2)
    25: (2, 0, 1),           # x^2 + 2 over GF(5)
    27: (1, 2, 0, 1),        # x^3 + 2x + 1 over GF(3)
    32: (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1 over GF(2)
}

MAX_FIELD_ORDER = 32


def _prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p^e, p prime; raise OAError otherwise."""
    if q < 2:
        raise OAError(f"field order must be at least 2, got {q}")
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q  # q itself is prime
    e = 0
    m = q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise OAError(f"{q} is not a prime power")
    return p, e


@dataclass(frozen=True, eq=False)
class FieldTable:
    """Verified addition/multiplication tables of GF(q).

    Element labels are 0..q-1 with 0 the additive and 1 the multiplicative
    identity.  For e > 1, label x encodes the polynomial whose coefficients
    are the base-p digits of x (least significant digit = constant term).
    """

    q: int
    p: int
    e: int
    add: np.ndarray
    mul: np.ndarray

    def neg(self, a: int) -> int:
        return int(np.nonzero(self.add[a] == 0)[0][0])


def _poly_digits(x: int, p: int, e: int) -> list[int]:
    d = []
    for _ in range(e):
        d.append(x % p)
        x //= p
    return d


def _digits_value(d, p: int) -> int:
    v = 0
    for c in reversed(d):
        v = v * p + c
    return v


def _verify_field(q: int, add: np.ndarray, mul: np.ndarray) -> None:
    idx = np.arange(q)
    ok = (
        np.array_equal(add, add.T)
        and np.array_equal(mul, mul.T)
        and np.array_equal(add[0], idx)
        and np.array_equal(mul[1], idx)
        and np.array_equal(mul[0], np.zeros(q, dtype=add.dtype))
        # every row of + is a permutation containing 0 => inverses exist
        and np.array_equal(np.sort(add, axis=1), np.tile(idx, (q, 1)))
        and np.array_equal(np.sort(mul[1:], axis=1), np.tile(idx, (q - 1, 1)))
    )
    if ok:
        lhs = add[add[:, :, None], idx[None, None, :]]
        rhs = add[idx[:, None, None], add[None, :, :]]
        ok = np.array_equal(lhs, rhs)
    if ok:
        lhs = mul[mul[:, :, None], idx[None, None, :]]
        rhs = mul[idx[:, None, None], mul[None, :, :]]
        ok = np.array_equal(lhs, rhs)
    if ok:
        lhs = mul[idx[:, None, None], add[None, :, :]]
        rhs = add[mul[:, :, None], mul[:, None, :]]
        ok = np.array_equal(lhs, rhs)
    if not ok:
        raise OAError(f"tables for GF({q}) failed the field axiom check")


def field_table(q: int) -> FieldTable:
    """Build verified GF(q) tables for a prime power q <= 32."""
    p, e = _prime_power(q)
    if q > MAX_FIELD_ORDER:
        raise OAError(f"field order {q} exceeds the supported maximum {MAX_FIELD_ORDER}")
    if e == 1:
        idx = np.arange(q)
        add = (idx[:, None] + idx[None, :]) % q
        mul = (idx[:, None] * idx[None, :]) % q
    else:
        red = _IRREDUCIBLE[q]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        digits = [_poly_digits(x, p, e) for x in range(q)]
        for a in range(q):
            for b in range(q):
                s = [(digits[a][i] + digits[b][i]) % p for i in range(e)]
                add[a, b] = _digits_value(s, p)
                prod = [0] * (2 * e - 1)
                for i in range(e):
                    if digits[a][i] == 0:
                        continue
                    for j in range(e):
                        prod[i + j] = (prod[i + j] + digits[a][i] * digits[b][j]) % p
                for d in range(2 * e - 2, e - 1, -1):
                    c = prod[d]
                    if c == 0:
                        continue
                    prod[d] = 0
                    for i in range(e):
                        prod[d - e + i] = (prod[d - e + i] - c * red[i]) % p
                mul[a, b] = _digits_value(prod[:e], p)
    add = add.astype(np.int16)
    mul = mul.astype(np.int16)
    _verify_field(q, add, mul)
    add.setflags(write=False)
    mul.setflags(write=False)
    return FieldTable(q=q, p=p, e=e, add=add, mul=mul)


# ---------------------------------------------------------------------------
# Latin squares


class LatinSquare:
    """An n x n square over symbols 0..n-1, each once per row and column."""

    __slots__ = ("n", "cells")

    def __init__(self, cells):
        arr = np.array(cells, dtype=np.int16)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise OAError(f"square must be n x n, got shape {arr.shape}")
        n = arr.shape[0]
        idx = np.arange(n, dtype=np.int16)
        if not np.array_equal(np.sort(arr, axis=1), np.tile(idx, (n, 1))):
            raise OAError("some row is not a permutation of 0..n-1")
        if not np.array_equal(np.sort(arr, axis=0), np.tile(idx[:, None], (1, n))):
            raise OAError("some column is not a permutation of 0..n-1")
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "cells", arr)

    def __setattr__(self, name, value):
        raise AttributeError("LatinSquare is immutable")

    def row_permutation(self, i: int) -> np.ndarray:
        """The permutation j -> cells[i, j]."""
        return self.cells[i]

    def column_permutation(self, j: int) -> np.ndarray:
        """The permutation i -> cells[i, j]."""
        return self.cells[:, j]

    def symbol_permutation(self, symbol: int) -> np.ndarray:
        """The permutation i -> j where cells[i, j] == symbol."""
        return np.argmax(self.cells == symbol, axis=1).astype(np.int16)

    def key(self) -> tuple:
        """Flattened cell tuple; defines the lexicographic order on squares."""
        return tuple(int(x) for x in self.cells.ravel())

    def __eq__(self, other):
        return isinstance(other, LatinSquare) and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"LatinSquare(n={self.n})"


def cyclic_square(n: int) -> LatinSquare:
    """The addition table of the integers mod n: cells[i, j] = i + j."""
    idx = np.arange(n)
    return LatinSquare((idx[:, None] + idx[None, :]) % n)


# ---------------------------------------------------------------------------
# orthogonal arrays


class OrthogonalArray:
    """An OA(k, n): n^2 rows of k symbols, every column pair orthogonal.

    Rows are sorted into lexicographic storage order on construction;
    3 <= k <= n+1 is enforced.
    """

    __slots__ = ("k", "n", "rows")

    def __init__(self, rows):
        arr = np.array(rows, dtype=np.int16)
        if arr.ndim != 2:
            raise OAError(f"array must be 2-d, got shape {arr.shape}")
        m, k = arr.shape
        n = math.isqrt(m)
        if n * n != m:
            raise OAError(f"row count {m} is not a perfect square")
        if not 3 <= k <= n + 1:
            raise OAError(f"need 3 <= k <= n+1, got k={k}, n={n}")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise OAError(f"symbols must lie in [0, {n - 1}]")
        arr = arr[np.lexsort(arr.T[::-1])]
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                codes = arr[:, i - 1].astype(np.int64) * n + arr[:, j - 1]
                counts = np.bincount(codes, minlength=n * n)
                if counts.max() > 1:
                    code = int(np.argmax(counts > 1))
                    raise OrthogonalityError(
                        f"columns {i} and {j} repeat the ordered pair "
                        f"({code // n}, {code % n})",
                        pair=(i, j),
                        repeated=(code // n, code % n),
                    )
        arr.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", arr)

    def __setattr__(self, name, value):
        raise AttributeError("OrthogonalArray is immutable")

    def column(self, i: int) -> np.ndarray:
        """Column i (1-based) as a vector over the n^2 stored rows."""
        return self.rows[:, i - 1]

    def __eq__(self, other):
        return isinstance(other, OrthogonalArray) and np.array_equal(self.rows, other.rows)

    def __hash__(self):
        return hash((self.k, self.n, self.rows.tobytes()))

    def __repr__(self):
        return f"OrthogonalArray(k={self.k}, n={self.n})"


def mols_to_oa(squares) -> OrthogonalArray:
    """Assemble an OA(k, n) from a list of k-2 pairwise orthogonal squares.

    Column 1 is the row index, column 2 the column index, column i+2 holds
    the entries of the i-th square.  A set (rather than a list) is first
    sorted lexicographically to fix the column order.
    """
    if isinstance(squares, (set, frozenset)):
        squares = sorted(squares, key=LatinSquare.key)
    squares = list(squares)
    if not squares:
        raise OAError("need at least one square")
    n = squares[0].n
    if any(s.n != n for s in squares):
        raise OAError("squares must share one order")
    for a in range(len(squares)):
        for b in range(a + 1, len(squares)):
            codes = squares[a].cells.astype(np.int64) * n + squares[b].cells
            counts = np.bincount(codes.ravel(), minlength=n * n)
            if counts.max() > 1:
                code = int(np.argmax(counts > 1))
                raise OrthogonalityError(
                    f"squares {a + 1} and {b + 1} are not orthogonal: pair "
                    f"({code // n}, {code % n}) repeats",
                    pair=(a + 1, b + 1),
                    repeated=(code // n, code % n),
                )
    idx = np.arange(n, dtype=np.int16)
    grid_r = np.repeat(idx, n)
    grid_c = np.tile(idx, n)
    cols = [grid_r, grid_c] + [s.cells.ravel() for s in squares]
    return OrthogonalArray(np.column_stack(cols))


def oa_to_mols(a: OrthogonalArray) -> list[LatinSquare]:
    """The k-2 squares of an OA: square i-2 has cells[u, v] = column i at row (u, v)."""
    n = a.n
    return [LatinSquare(a.rows[:, i].reshape(n, n)) for i in range(2, a.k)]


def rows_agree_in_one_column(a: OrthogonalArray) -> bool:
    """Whether every two distinct rows agree in exactly one column.

    Holds for every OA(n+1, n); used as a structural check on plane arrays.
    """
    m = a.rows.shape[0]
    agree = (a.rows[:, None, :] == a.rows[None, :, :]).sum(axis=2)
    agree[np.arange(m), np.arange(m)] = 1
    return bool(np.all(agree == 1))


# ---------------------------------------------------------------------------
# transforms


@dataclass(frozen=True)
class Transform:
    """One relabelling operation on an orthogonal array.

    kind = "rows":    perm maps stored row positions (0-based, length n^2)
    kind = "columns": perm maps column labels (1-based images, length k)
    kind = "symbols": perm maps symbols (0-based, length n) within `column`
    """

    kind: str
    perm: tuple
    column: int | None = None

    def __post_init__(self):
        if self.kind not in ("rows", "columns", "symbols"):
            raise OAError(f"unknown transform kind {self.kind!r}")
        if self.kind == "symbols" and self.column is None:
            raise OAError("symbol transform needs a target column")
        base = 1 if self.kind == "columns" else 0
        if sorted(self.perm) != list(range(base, base + len(self.perm))):
            raise OAError("transform permutation is not a bijection on its domain")


@dataclass(frozen=True)
class TransformResult:
    """A transformed array plus the sort bookkeeping bit.

    ``sort_parity`` is the parity of the row permutation taking the
    logically transformed array back to lexicographic storage order; the
    sigma-parity of the logical array equals the stored sigma-parity plus
    this bit (row order is invisible to tau-parity).
    """

    oa: OrthogonalArray
    sort_parity: int


def apply_transform(a: OrthogonalArray, t: Transform) -> TransformResult:
    mat = a.rows
    if t.kind == "rows":
        if len(t.perm) != a.n * a.n:
            raise OAError(f"row permutation must have length {a.n * a.n}")
        # re-sorting restores the identical stored array; only the parity of
        # the logical permutation survives
        return TransformResult(a, permutation_parity(t.perm))
    if t.kind == "columns":
        if len(t.perm) != a.k:
            raise OAError(f"column permutation must have length {a.k}")
        new = np.empty_like(mat)
        for i, gi in enumerate(t.perm, start=1):
            new[:, gi - 1] = mat[:, i - 1]
    else:
        if len(t.perm) != a.n:
            raise OAError(f"symbol permutation must have length {a.n}")
        if not 1 <= t.column <= a.k:
            raise OAError(f"column {t.column} out of range 1..{a.k}")
        gamma = np.asarray(t.perm, dtype=np.int16)
        new = mat.copy()
        new[:, t.column - 1] = gamma[mat[:, t.column - 1]]
        if t.column > 2:
            return TransformResult(OrthogonalArray(new), 0)
    order = np.lexsort(new.T[::-1])
    return TransformResult(OrthogonalArray(new), permutation_parity(order))
