"""Brute-force oracles: tiny-order Latin square enumeration and
backtracking search for arrays with a prescribed parity.

The enumerator fills rows top-down, cells left-to-right, trying symbols in
ascending order, so the stream of squares is deterministic and resumable
from any previously yielded square.  The array search extends an OA column
by column; each new column is a Latin square (in the row/column grid of the
first two columns) orthogonal to all previously placed squares.  Parity is
only known once a square is complete, so pruning happens at column
completion: the parity components among the filled columns are final and
must match the target.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .core import LatinSquare, OAError, OrthogonalArray
from .parity import TauVector, check_plausible, latin_square_parities, plausible_types, tau_parity

MAX_ENUM_ORDER = 6

# exhaustive search is certified only at scales where full exploration is
# realistic on a desk machine
_EXHAUSTIVE_LIMITS = {3: 6, 4: 5}


def enumerate_latin_squares(n: int, resume_after: LatinSquare | None = None):
    """Yield every Latin square of order n exactly once, in lexicographic
    order of the flattened cell tuple.  With ``resume_after`` the stream
    restarts strictly after that square."""
    if n > MAX_ENUM_ORDER:
        raise OAError(f"exhaustive enumeration supports n <= {MAX_ENUM_ORDER}, got {n}")
    if n < 1:
        raise OAError(f"need n >= 1, got {n}")
    full = (1 << n) - 1
    rowmask = [0] * n
    colmask = [0] * n
    grid = [[0] * n for _ in range(n)]
    cursor = None
    if resume_after is not None:
        if resume_after.n != n:
            raise OAError("resume square has the wrong order")
        cursor = [int(x) for x in resume_after.cells.ravel()]

    def rec(pos: int, tight: bool):
        if pos == n * n:
            if not tight:  # strictly after the cursor
                yield LatinSquare(grid)
            return
        r, c = divmod(pos, n)
        avail = full & ~(rowmask[r] | colmask[c])
        lo = cursor[pos] if tight else 0
        m = (avail >> lo) << lo
        while m:
            bit = m & -m
            m ^= bit
            s = bit.bit_length() - 1
            grid[r][c] = s
            rowmask[r] |= bit
            colmask[c] |= bit
            yield from rec(pos + 1, tight and s == lo)
            rowmask[r] ^= bit
            colmask[c] ^= bit

    yield from rec(0, cursor is not None)


def achieved_parity_types(n: int, stop_when_complete: bool = True) -> set:
    """The set of parity types realised by at least one square of order n.

    At most four types are possible, so with ``stop_when_complete`` the
    enumeration ends as soon as all four have been seen; the result is the
    same either way.
    """
    possible = set(plausible_types(n % 4))
    seen: set[str] = set()
    for sq in enumerate_latin_squares(n):
        seen.add(latin_square_parities(sq).type_str)
        if stop_when_complete and seen == possible:
            break
    return seen


# ---------------------------------------------------------------------------
# targeted search


@dataclass(frozen=True)
class SearchSpec:
    """What to look for and how hard to try.

    ``target`` is a TauVector for the full (k, n), or a 3-bit parity-type
    string when k = 3.  Modes: "first-hit" (deterministic DFS, first match),
    "exhaustive" (certifies non-existence; only for k=3 n<=6 and k=4 n<=5),
    "randomized" (seeded symbol shuffles with restarts).
    """

    k: int
    n: int
    target: object
    mode: str = "first-hit"
    seed: int | None = None
    restarts: int = 1
    max_nodes: int | None = None

    def __post_init__(self):
        if self.mode not in ("exhaustive", "first-hit", "randomized"):
            raise OAError(f"unknown search mode {self.mode!r}")
        if not 3 <= self.k <= self.n + 1:
            raise OAError(f"need 3 <= k <= n+1, got k={self.k}, n={self.n}")
        if self.mode == "exhaustive":
            limit = _EXHAUSTIVE_LIMITS.get(self.k)
            if limit is None or self.n > limit:
                raise OAError(
                    "exhaustive mode is certified only for k=3 with n <= 6 "
                    "and k=4 with n <= 5"
                )
        if isinstance(self.target, str):
            if self.k != 3 or len(self.target) != 3 or set(self.target) - {"0", "1"}:
                raise OAError("a parity-type target is a 3-bit string and needs k = 3")
            if self.target not in plausible_types(self.n % 4):
                raise OAError(
                    f"type {self.target} is impossible for n = {self.n % 4} mod 4"
                )
        elif isinstance(self.target, TauVector):
            if self.target.k != self.k or self.target.nmod4 != self.n % 4:
                raise OAError("target dimensions disagree with the search spec")
            if not check_plausible(self.target).plausible:
                raise OAError("target tau vector is not plausible")
        else:
            raise OAError("target must be a TauVector or a parity-type string")


@dataclass(frozen=True)
class SearchOutcome:
    """found=None with certified_exhausted=True is a non-existence proof;
    with certified_exhausted=False the budget ran out first."""

    found: OrthogonalArray | None
    certified_exhausted: bool
    nodes: int
    seed: int | None = None


class _Budget(Exception):
    pass


class _Found(Exception):
    def __init__(self, oa):
        self.oa = oa


def _partial_tau_matches(columns, n: int, target: TauVector, upto: int) -> bool:
    """Whether the tau components among columns 1..upto equal the target's."""
    from .parity import _tau_bits

    mat = np.column_stack(columns[:upto]).astype(np.int16)
    bits = _tau_bits(mat, n)
    sub = target.bits[:upto + 1, :upto + 1, :upto + 1]
    return np.array_equal(bits, sub)


def _search(spec: SearchSpec, rng: random.Random | None, node_cap: int | None):
    n, k = spec.n, spec.k
    idx = np.arange(n, dtype=np.int16)
    grid_r = np.repeat(idx, n)
    grid_c = np.tile(idx, n)
    columns = [grid_r, grid_c]
    nodes = 0

    def column_done() -> bool:
        if isinstance(spec.target, str):
            square = LatinSquare(columns[-1].reshape(n, n))
            return latin_square_parities(square).type_str == spec.target
        return _partial_tau_matches(columns, n, spec.target, len(columns))

    def place_column():
        nonlocal nodes
        if len(columns) == k:
            raise _Found(OrthogonalArray(np.column_stack(columns)))
        new = np.zeros(n * n, dtype=np.int16)
        rowmask = [0] * n
        colmask = [0] * n
        priors = columns[2:]
        pairmask = [[0] * n for _ in priors]
        full = (1 << n) - 1

        def cell(pos: int):
            nonlocal nodes
            if pos == n * n:
                columns.append(new.copy())
                if column_done():
                    place_column()
                columns.pop()
                return
            r, c = divmod(pos, n)
            avail = full & ~(rowmask[r] | colmask[c])
            for t, prior in enumerate(priors):
                avail &= ~pairmask[t][prior[pos]]
                if not avail:
                    return
            symbols = [b.bit_length() - 1 for b in _bits(avail)]
            if rng is not None:
                rng.shuffle(symbols)
            for s in symbols:
                bit = 1 << s
                nodes += 1
                if node_cap is not None and nodes > node_cap:
                    raise _Budget
                new[pos] = s
                rowmask[r] |= bit
                colmask[c] |= bit
                for t, prior in enumerate(priors):
                    pairmask[t][prior[pos]] |= bit
                cell(pos + 1)
                rowmask[r] ^= bit
                colmask[c] ^= bit
                for t, prior in enumerate(priors):
                    pairmask[t][prior[pos]] ^= bit

        cell(0)

    try:
        place_column()
    except _Found as hit:
        return hit.oa, nodes, False
    except _Budget:
        return None, nodes, True
    return None, nodes, False


def _bits(mask: int):
    while mask:
        bit = mask & -mask
        mask ^= bit
        yield bit


def find_oa_with_parity(spec: SearchSpec) -> SearchOutcome:
    """Search for an OA(k, n) whose parity matches the target.

    A returned array is re-verified against the target before being handed
    back.  Non-existence is certified only in exhaustive mode with no node
    budget; running out of budget is reported as an inconclusive outcome.
    """
    total_nodes = 0
    if spec.mode == "randomized":
        seed = spec.seed if spec.seed is not None else 0
        for attempt in range(max(1, spec.restarts)):
            rng = random.Random(seed * 1_000_003 + attempt)
            oa, nodes, capped = _search(spec, rng, spec.max_nodes)
            total_nodes += nodes
            if oa is not None:
                _verify(spec, oa)
                return SearchOutcome(oa, False, total_nodes, seed)
        return SearchOutcome(None, False, total_nodes, seed)

    oa, nodes, capped = _search(spec, None, spec.max_nodes)
    total_nodes += nodes
    if oa is not None:
        _verify(spec, oa)
        return SearchOutcome(oa, False, total_nodes)
    certified = spec.mode == "exhaustive" and not capped
    return SearchOutcome(None, certified, total_nodes)


def _verify(spec: SearchSpec, oa: OrthogonalArray) -> None:
    if isinstance(spec.target, str):
        got = tau_parity(oa)
        ty = got.triple_type(1, 2, 3)
        if ty != spec.target:
            raise OAError(f"search returned type {ty}, wanted {spec.target}")
    elif tau_parity(oa) != spec.target:
        raise OAError("search result does not match the target tau vector")
