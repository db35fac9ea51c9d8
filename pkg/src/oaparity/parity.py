"""Tau-parity and sigma-parity of orthogonal arrays.

The tau-parity of an OA(k, n) is the vector of bits tau^c_{ij}, one per
ordered triple of distinct columns: within each symbol class of column c the
rows induce a permutation from the column-i entries to the column-j entries,
and tau^c_{ij} adds up the parities of those n permutations.

The sigma-parity is the vector of parities of the permutations sigma_{ij} of
the row-index set [0, n^2) given by r -> (a_ri, a_rj), with rows indexed by
their lexicographic storage position.  Under that convention sigma_12 is the
identity.

The two determine each other once a standardisation fixes the choice between
a sigma-parity and its complement:

    tau^c_{ij}      = sigma_ci + sigma_cj
    sigma_ji        = sigma_ij + C(n,2)          (mod 2 throughout)

Canonical tau storage keeps bits only for i < j; reads with i > j use the
symmetry tau^c_{ij} = tau^c_{ji}, which therefore holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .core import (
    LatinSquare,
    OAError,
    OrthogonalArray,
    Transform,
    apply_transform,
    parity_batch,
    permutation_parity,
)


def binom2_bit(nmod4: int) -> int:
    """Parity of C(n, 2), which depends only on n mod 4."""
    return 1 if nmod4 % 4 in (2, 3) else 0


def plausible_types(nmod4: int) -> tuple[str, str, str, str]:
    """The four parity types a square of order n can have."""
    if nmod4 % 4 in (0, 1):
        return ("000", "011", "101", "110")
    return ("111", "100", "010", "001")


def equiparity_type(nmod4: int) -> str:
    return "000" if nmod4 % 4 in (0, 1) else "111"


class ParityTriple(NamedTuple):
    """Row, column and symbol parity of one Latin square."""

    pr: int
    pc: int
    ps: int

    @property
    def type_str(self) -> str:
        return f"{self.pr}{self.pc}{self.ps}"

    @property
    def is_equiparity(self) -> bool:
        return self.pr == self.pc == self.ps


def latin_square_parities(square: LatinSquare) -> ParityTriple:
    """Row/column/symbol parity bits of a Latin square.

    Each bit is the mod-2 sum of the parities of the n permutations obtained
    by fixing a row (j -> cells[i,j]), a column (i -> cells[i,j]) or a symbol
    (i -> j where cells[i,j] is the symbol).
    """
    n = square.n
    cells = square.cells
    pr = int(parity_batch(cells).sum() & 1)
    pc = int(parity_batch(cells.T).sum() & 1)
    sym = np.empty((n, n), dtype=np.int16)
    sym[cells, np.arange(n)[:, None]] = np.arange(n, dtype=np.int16)[None, :]
    ps = int(parity_batch(sym).sum() & 1)
    return ParityTriple(pr, pc, ps)


# ---------------------------------------------------------------------------
# parity vectors


def _canonical_mask(k: int) -> np.ndarray:
    c = np.arange(k + 1)[:, None, None]
    i = np.arange(k + 1)[None, :, None]
    j = np.arange(k + 1)[None, None, :]
    return (c >= 1) & (i >= 1) & (i < j) & (j <= k) & (c != i) & (c != j)


class TauVector:
    """All bits tau^c_{ij} of one parity vector, stored canonically for i < j.

    ``n`` is optional: parity laws depend only on n mod 4, and vectors built
    from abstract sigma data may not come with a concrete alphabet size.
    """

    __slots__ = ("k", "nmod4", "n", "bits")

    def __init__(self, k: int, nmod4: int, bits: np.ndarray, n: int | None = None):
        if k < 3:
            raise OAError(f"need k >= 3, got {k}")
        if n is not None and n % 4 != nmod4 % 4:
            raise OAError(f"n={n} inconsistent with nmod4={nmod4}")
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.shape != (k + 1,) * 3:
            raise OAError(f"bits must have shape {(k + 1,) * 3} with index 0 unused")
        arr = np.where(_canonical_mask(k), bits, 0).astype(np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "nmod4", nmod4 % 4)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", arr)

    def __setattr__(self, name, value):
        raise AttributeError("TauVector is immutable")

    def get(self, c: int, i: int, j: int) -> int:
        if len({c, i, j}) != 3 or not all(1 <= x <= self.k for x in (c, i, j)):
            raise OAError(f"invalid column triple ({c}, {i}, {j})")
        if i > j:
            i, j = j, i
        return int(self.bits[c, i, j])

    def mirrored(self) -> np.ndarray:
        """Full (k+1)^3 bit array with both index orders populated."""
        return self.bits | self.bits.transpose(0, 2, 1)

    def triple_type(self, c1: int, c2: int, c3: int) -> str:
        """Parity type of the square on columns c1 < c2 < c3, as 'rcs' bits."""
        if not c1 < c2 < c3:
            raise OAError("columns must be given in increasing order")
        return f"{self.get(c1, c2, c3)}{self.get(c2, c1, c3)}{self.get(c3, c1, c2)}"

    def entries(self) -> list[tuple[int, int, int, int]]:
        """Canonical [c, i, j, bit] list over i < j."""
        out = []
        for c in range(1, self.k + 1):
            for i in range(1, self.k + 1):
                for j in range(i + 1, self.k + 1):
                    if c not in (i, j):
                        out.append((c, i, j, int(self.bits[c, i, j])))
        return out

    @classmethod
    def from_entries(cls, k, nmod4, entries, n=None) -> "TauVector":
        bits = np.zeros((k + 1, k + 1, k + 1), dtype=np.uint8)
        for c, i, j, b in entries:
            if i > j:
                i, j = j, i
            bits[c, i, j] = b & 1
        return cls(k=k, nmod4=nmod4, bits=bits, n=n)

    def __eq__(self, other):
        return (
            isinstance(other, TauVector)
            and self.k == other.k
            and self.nmod4 == other.nmod4
            and np.array_equal(self.bits, other.bits)
        )

    def __hash__(self):
        return hash((self.k, self.nmod4, self.bits.tobytes()))

    def __repr__(self):
        return f"TauVector(k={self.k}, nmod4={self.nmod4})"


class SigmaMatrix:
    """Full k x k matrix of sigma-parity bits with zero diagonal.

    Off-diagonal entries satisfy m[j][i] = m[i][j] + C(n,2) mod 2, which the
    constructor enforces.
    """

    __slots__ = ("k", "nmod4", "n", "m")

    def __init__(self, k: int, nmod4: int, m: np.ndarray, n: int | None = None):
        if k < 3:
            raise OAError(f"need k >= 3, got {k}")
        if n is not None and n % 4 != nmod4 % 4:
            raise OAError(f"n={n} inconsistent with nmod4={nmod4}")
        arr = np.asarray(m, dtype=np.uint8).copy()
        if arr.shape != (k + 1, k + 1):
            raise OAError(f"matrix must have shape ({k + 1}, {k + 1}) with row/col 0 unused")
        arr[0, :] = 0
        arr[:, 0] = 0
        if np.any(np.diagonal(arr)):
            raise OAError("diagonal entries must be zero")
        kk = binom2_bit(nmod4)
        sub = arr[1:, 1:]
        off = ~np.eye(k, dtype=bool)
        if not np.array_equal(sub.T[off], (sub[off] ^ kk)):
            raise OAError("entries violate the transpose law m[j][i] = m[i][j] + C(n,2)")
        arr.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "nmod4", nmod4 % 4)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SigmaMatrix is immutable")

    def get(self, i: int, j: int) -> int:
        if i == j or not (1 <= i <= self.k and 1 <= j <= self.k):
            raise OAError(f"invalid column pair ({i}, {j})")
        return int(self.m[i, j])

    def row_sums(self) -> tuple[int, ...]:
        """Out-degrees mu_c of the sigma-graph, c = 1..k."""
        return tuple(int(s) for s in self.m[1:, 1:].sum(axis=1))

    def complement(self) -> "SigmaMatrix":
        off = ~np.eye(self.k + 1, dtype=bool)
        off[0, :] = False
        off[:, 0] = False
        new = self.m.copy()
        new[off] ^= 1
        return SigmaMatrix(k=self.k, nmod4=self.nmod4, m=new, n=self.n)

    def __eq__(self, other):
        return (
            isinstance(other, SigmaMatrix)
            and self.k == other.k
            and self.nmod4 == other.nmod4
            and np.array_equal(self.m, other.m)
        )

    def __hash__(self):
        return hash((self.k, self.nmod4, self.m.tobytes()))

    def __repr__(self):
        return f"SigmaMatrix(k={self.k}, nmod4={self.nmod4})"


class StandardSigma:
    """Upper-triangle sigma bits standardised so the (1,2) entry is zero."""

    __slots__ = ("k", "nmod4", "n", "upper")

    def __init__(self, k: int, nmod4: int, upper: np.ndarray, n: int | None = None):
        if k < 3:
            raise OAError(f"need k >= 3, got {k}")
        if n is not None and n % 4 != nmod4 % 4:
            raise OAError(f"n={n} inconsistent with nmod4={nmod4}")
        arr = np.asarray(upper, dtype=np.uint8).copy()
        if arr.shape != (k + 1, k + 1):
            raise OAError(f"upper triangle must have shape ({k + 1}, {k + 1})")
        arr[~np.triu(np.ones((k + 1, k + 1), dtype=bool), 1)] = 0
        arr[0, :] = 0
        if arr[1, 2]:
            raise OAError("standardised sigma must have zero (1,2) entry")
        arr.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "nmod4", nmod4 % 4)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "upper", arr)

    def __setattr__(self, name, value):
        raise AttributeError("StandardSigma is immutable")

    def get(self, i: int, j: int) -> int:
        if i == j or not (1 <= i <= self.k and 1 <= j <= self.k):
            raise OAError(f"invalid column pair ({i}, {j})")
        if i < j:
            return int(self.upper[i, j])
        return int(self.upper[j, i]) ^ binom2_bit(self.nmod4)

    def to_matrix(self) -> SigmaMatrix:
        kk = binom2_bit(self.nmod4)
        m = self.upper.copy()
        low = np.tril(np.ones((self.k + 1, self.k + 1), dtype=bool), -1)
        low[:, 0] = False
        low[0, :] = False
        m[low] = (self.upper.T[low] ^ kk)
        return SigmaMatrix(k=self.k, nmod4=self.nmod4, m=m, n=self.n)

    def pairs(self) -> list[tuple[int, int, int]]:
        """[i, j, bit] for 1 <= i < j <= k."""
        return [
            (i, j, int(self.upper[i, j]))
            for i in range(1, self.k + 1)
            for j in range(i + 1, self.k + 1)
        ]

    def __eq__(self, other):
        return (
            isinstance(other, StandardSigma)
            and self.k == other.k
            and self.nmod4 == other.nmod4
            and np.array_equal(self.upper, other.upper)
        )

    def __hash__(self):
        return hash((self.k, self.nmod4, self.upper.tobytes()))

    def __repr__(self):
        return f"StandardSigma(k={self.k}, nmod4={self.nmod4})"


def standardise(sigma: SigmaMatrix) -> StandardSigma:
    """Pick between a sigma matrix and its complement by zeroing entry (1,2)."""
    chosen = sigma.complement() if sigma.m[1, 2] else sigma
    upper = np.triu(chosen.m, 1)
    return StandardSigma(k=sigma.k, nmod4=sigma.nmod4, upper=upper, n=sigma.n)


def standardise_by_out_degree(sigma: SigmaMatrix, parity: int) -> SigmaMatrix:
    """Pick the representative whose out-degrees all have the given parity.

    Only meaningful when all out-degree parities agree (the plane case with
    odd n); complementation then flips them all because k-1 is odd.
    """
    mu = np.array(sigma.row_sums()) & 1
    if not (np.all(mu == mu[0])):
        raise OAError("out-degree parities are not uniform; cannot standardise by them")
    if sigma.k % 2:
        raise OAError("out-degree standardisation needs even k (odd n plane case)")
    return sigma if mu[0] == parity % 2 else sigma.complement()


# ---------------------------------------------------------------------------
# parity of an orthogonal array


def _tau_bits(mat: np.ndarray, n: int) -> np.ndarray:
    """Canonical tau bits of an OA matrix in any row order."""
    k = mat.shape[1]
    bits = np.zeros((k + 1, k + 1, k + 1), dtype=np.uint8)
    cols = np.arange(1, k + 1)
    for c in range(1, k + 1):
        order = np.argsort(mat[:, c - 1], kind="stable")
        grouped = mat[order].reshape(n, n, k)
        others = cols[cols != c]
        ii, jj = np.meshgrid(others, others, indexing="ij")
        sel = ii < jj
        left, right = ii[sel], jj[sel]
        p = len(left)
        x = grouped[:, :, left - 1]   # (n, n, p) column-i entries per symbol class
        y = grouped[:, :, right - 1]
        perms = np.empty((p, n, n), dtype=np.int16)
        perms[
            np.arange(p)[None, None, :],
            np.arange(n)[:, None, None],
            x,
        ] = y
        par = parity_batch(perms.reshape(p * n, n)).reshape(p, n)
        bits[c, left, right] = par.sum(axis=1) & 1
    return bits


@lru_cache(maxsize=256)
def tau_parity(a: OrthogonalArray) -> TauVector:
    """The tau-parity of an orthogonal array, from the defining permutations."""
    return TauVector(k=a.k, nmod4=a.n % 4, bits=_tau_bits(a.rows, a.n), n=a.n)


def _sigma_bits(mat: np.ndarray, n: int) -> np.ndarray:
    """Full sigma matrix bits of an OA matrix; rows indexed by storage position."""
    k = mat.shape[1]
    kk = binom2_bit(n % 4)
    pairs = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    perms = np.empty((len(pairs), n * n), dtype=np.int32)
    for t, (i, j) in enumerate(pairs):
        perms[t] = mat[:, i - 1].astype(np.int32) * n + mat[:, j - 1]
    par = parity_batch(perms)
    m = np.zeros((k + 1, k + 1), dtype=np.uint8)
    for t, (i, j) in enumerate(pairs):
        m[i, j] = par[t]
        m[j, i] = par[t] ^ kk
    return m


@lru_cache(maxsize=256)
def sigma_parity(a: OrthogonalArray) -> SigmaMatrix:
    """The sigma-parity of an orthogonal array at its stored row order."""
    return SigmaMatrix(k=a.k, nmod4=a.n % 4, m=_sigma_bits(a.rows, a.n), n=a.n)


# ---------------------------------------------------------------------------
# conversions


def tau_from_sigma(s: SigmaMatrix | StandardSigma) -> TauVector:
    """tau^c_{ij} = sigma_ci + sigma_cj; complements map to the same vector."""
    full = s.to_matrix() if isinstance(s, StandardSigma) else s
    m = full.m
    t = m[:, :, None] ^ m[:, None, :]
    return TauVector(k=full.k, nmod4=full.nmod4, bits=t, n=full.n)


def sigma_from_tau(t: TauVector) -> StandardSigma:
    """Recover the standardised sigma-parity determined by a plausible tau."""
    report = check_plausible(t)
    if not report.plausible:
        kind, witness = report.violations[0]
        raise OAError(f"tau vector is not plausible: {kind} violated at {witness}")
    k = t.k
    kk = binom2_bit(t.nmod4)
    up = np.zeros((k + 1, k + 1), dtype=np.uint8)
    for j in range(3, k + 1):
        up[1, j] = t.get(1, 2, j)
        up[2, j] = t.get(2, 1, j) ^ kk
    for i in range(3, k + 1):
        for j in range(i + 1, k + 1):
            up[i, j] = t.get(1, 2, i) ^ t.get(i, 1, j) ^ kk
    return StandardSigma(k=k, nmod4=t.nmod4, upper=up, n=t.n)


# ---------------------------------------------------------------------------
# plausibility


@dataclass(frozen=True)
class PlausibilityReport:
    """Outcome of the structural constraints on a tau vector.

    ``pp_plausible`` is "na" unless the vector is a plane candidate
    (k = n+1 with n known); plausibility itself needs only n mod 4.
    ``violations`` holds the first offending witness per constraint.
    """

    plausible: bool
    pp_plausible: str
    violations: list = field(default_factory=list)


def check_plausible(t: TauVector) -> PlausibilityReport:
    """Check index symmetry, fixed-column additivity and the triple law.

    Symmetry holds by construction of the canonical storage.  For plane
    candidates (k = n+1) the over-columns sum rule for each pair is also
    evaluated and reported as ``pp_plausible``.
    """
    k = t.k
    kk = binom2_bit(t.nmod4)
    full = t.mirrored()
    violations = []

    for c in range(1, k + 1):
        w = 1 if c != 1 else 2
        f = full[c, w]
        pred = f[:, None] ^ f[None, :]
        bad = (full[c] ^ pred).astype(bool) & _column_pair_mask(k, c)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            violations.append(("additivity", (c, int(i), int(j))))
            break

    a = full
    b = full.transpose(1, 0, 2)
    e = full.transpose(2, 1, 0)
    s = a ^ b ^ e
    cc = np.arange(k + 1)[:, None, None]
    ii = np.arange(k + 1)[None, :, None]
    jj = np.arange(k + 1)[None, None, :]
    strict = (cc >= 1) & (cc < ii) & (ii < jj) & (jj <= k)
    bad3 = (s != kk) & strict
    if bad3.any():
        c, i, j = np.argwhere(bad3)[0]
        violations.append(("triple", (int(c), int(i), int(j))))

    plausible = not violations

    pp = "na"
    if t.n is not None and t.k == t.n + 1:
        sums = full[1:].sum(axis=0) & 1
        upper = np.triu(np.ones((k + 1, k + 1), dtype=bool), 1)
        upper[0, :] = False
        badpp = (sums != kk) & upper
        if badpp.any():
            i, j = np.argwhere(badpp)[0]
            violations.append(("pp", (int(i), int(j))))
            pp = "no"
        else:
            pp = "yes" if plausible else "no"

    return PlausibilityReport(plausible=plausible, pp_plausible=pp, violations=violations)


def _column_pair_mask(k: int, c: int) -> np.ndarray:
    i = np.arange(k + 1)[:, None]
    j = np.arange(k + 1)[None, :]
    m = (i >= 1) & (i < j) & (j <= k) & (i != c) & (j != c)
    return m


def is_pp_plausible(t: TauVector) -> bool:
    return check_plausible(t).pp_plausible == "yes"


# ---------------------------------------------------------------------------
# transformation laws


def transform_parity_laws(
    a: OrthogonalArray, t: Transform
) -> tuple[TauVector, SigmaMatrix]:
    """Predicted tau and sigma of the stored result of ``apply_transform``.

    Row permutations leave the stored array (hence both parities) unchanged;
    column permutations relabel indices and complement sigma by the parity of
    the re-sort; a symbol permutation gamma in column c adds n*parity(gamma)
    to every tau component with c in the lower index pair and to the sigma
    entries in row/column c, plus the re-sort complement when c is column 1
    or 2.  The test suite asserts these predictions against recomputation.
    """
    tau = tau_parity(a)
    sigma = sigma_parity(a)
    if t.kind == "rows":
        return tau, sigma

    k, n = a.k, a.n
    sort_parity = apply_transform(a, t).sort_parity

    if t.kind == "columns":
        g = np.zeros(k + 1, dtype=np.int64)
        g[1:] = np.asarray(t.perm)
        new_bits = np.zeros_like(tau.bits)
        new_bits[g[:, None, None], g[None, :, None], g[None, None, :]] = tau.mirrored()
        new_tau = TauVector(k=k, nmod4=n % 4, bits=new_bits | new_bits.transpose(0, 2, 1), n=n)
        new_m = np.zeros_like(sigma.m)
        new_m[g[1:, None], g[None, 1:]] = sigma.m[1:, 1:]
        if sort_parity:
            off = ~np.eye(k + 1, dtype=bool)
            off[0, :] = False
            off[:, 0] = False
            new_m[off] ^= 1
        return new_tau, SigmaMatrix(k=k, nmod4=n % 4, m=new_m, n=n)

    c = t.column
    flip = (n & 1) & permutation_parity(t.perm)
    new_bits = tau.bits.copy()
    if flip:
        for x in range(1, k + 1):
            if x == c:
                continue
            lo, hi = (x, c) if x < c else (c, x)
            for up in range(1, k + 1):
                if up not in (lo, hi):
                    new_bits[up, lo, hi] ^= 1
    new_m = sigma.m.copy()
    if flip:
        new_m[c, 1:] ^= 1
        new_m[1:, c] ^= 1
        new_m[c, c] = 0
    if sort_parity:
        off = ~np.eye(k + 1, dtype=bool)
        off[0, :] = False
        off[:, 0] = False
        new_m[off] ^= 1
    return (
        TauVector(k=k, nmod4=n % 4, bits=new_bits, n=n),
        SigmaMatrix(k=k, nmod4=n % 4, m=new_m, n=n),
    )
