"""Switching classes of plausible parity vectors.

A standardised sigma-parity on k columns is C(k,2)-1 free bits (the (1,2)
entry is pinned to zero), and these states are in bijection with the
plausible tau vectors.  Two operations act on them:

* permuting: relabel columns by some permutation of 1..k, then re-standardise
  (complement everything if the new (1,2) entry came out 1 -- complementation
  does not change the underlying tau vector);
* swapping at a vertex subset C (odd n only): flip every bit whose pair has
  exactly one endpoint in C, then re-standardise.  Swapping at C equals
  swapping at the complement of C, so singleton swaps generate everything.

Orbits of the group generated by these operations are the switching classes;
their sizes divide k! for even n and k! * 2^(k-1) for odd n.

States pack into one machine word: pair (i,j), i < j, taken in lexicographic
order and skipping (1,2), occupies vector position rank-1; position 0 is the
most significant bit so that numeric order on words is lexicographic order
on bit vectors (stable canonical representatives).  Full enumeration walks a
visited bitmap over all 2^(C(k,2)-1) states; single orbits at larger k use a
sorted visited array keyed by the 64-bit word.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .core import OAError, OrthogonalArray, ResourceLimitError
from .parity import (
    StandardSigma,
    TauVector,
    binom2_bit,
    sigma_from_tau,
    tau_from_sigma,
    tau_parity,
)

_BITMAP_LIMIT = 1 << 27  # largest state space enumerated with a dense bitmap
_DEFAULT_BUDGET_MB = 2048
_BUDGET_ENV = "OAPARITY_ORBIT_BUDGET_MB"


def _stored_pairs(k: int) -> list[tuple[int, int]]:
    pairs = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    return pairs[1:]  # (1,2) is pinned by standardisation


def _bit_positions(k: int) -> dict[tuple[int, int], int]:
    stored = _stored_pairs(k)
    b = len(stored)
    return {pair: b - 1 - v for v, pair in enumerate(stored)}


@dataclass(frozen=True)
class ParityState:
    """A standardised sigma-parity packed into one integer word."""

    k: int
    nmod4: int
    word: int

    def __post_init__(self):
        b = self.k * (self.k - 1) // 2 - 1
        if not 0 <= self.word < (1 << b):
            raise OAError(f"word out of range for k={self.k}")

    @property
    def nbits(self) -> int:
        return self.k * (self.k - 1) // 2 - 1


def pack_state(std: StandardSigma) -> ParityState:
    pos = _bit_positions(std.k)
    word = 0
    for pair, p in pos.items():
        if std.upper[pair]:
            word |= 1 << p
    return ParityState(k=std.k, nmod4=std.nmod4, word=word)


def unpack_state(s: ParityState) -> StandardSigma:
    up = np.zeros((s.k + 1, s.k + 1), dtype=np.uint8)
    for pair, p in _bit_positions(s.k).items():
        up[pair] = (s.word >> p) & 1
    return StandardSigma(k=s.k, nmod4=s.nmod4, upper=up)


def state_of_tau(t: TauVector) -> ParityState:
    return pack_state(sigma_from_tau(t))


def tau_of_state(s: ParityState) -> TauVector:
    return tau_from_sigma(unpack_state(s))


# ---------------------------------------------------------------------------
# the two operations (reference implementations on the sigma matrix)


def act_permute(s: ParityState, g) -> ParityState:
    """Relabel columns by g (1-based images) and re-standardise.

    Satisfies act(act(s, g), h) = act(s, h o g).
    """
    g = tuple(g)
    if sorted(g) != list(range(1, s.k + 1)):
        raise OAError("g must be a permutation of 1..k")
    ginv = [0] * (s.k + 1)
    for i, gi in enumerate(g, start=1):
        ginv[gi] = i
    m = unpack_state(s).to_matrix().m
    ginv_arr = np.asarray(ginv)
    new = m[np.ix_(ginv_arr, ginv_arr)]
    if new[1, 2]:
        new = new.copy()
        off = ~np.eye(s.k + 1, dtype=bool)
        off[0, :] = False
        off[:, 0] = False
        new[off] ^= 1
    return pack_state(
        StandardSigma(k=s.k, nmod4=s.nmod4, upper=np.triu(new, 1))
    )


def act_swap(s: ParityState, cset) -> ParityState:
    """Flip bits with exactly one endpoint in cset; odd n only."""
    if s.nmod4 % 2 == 0:
        raise OAError("swap undefined for even n")
    members = set(cset)
    if not members <= set(range(1, s.k + 1)):
        raise OAError("swap set must be a subset of 1..k")
    chi = np.zeros(s.k + 1, dtype=np.uint8)
    for v in members:
        chi[v] = 1
    m = unpack_state(s).to_matrix().m.copy()
    flip = chi[:, None] ^ chi[None, :]
    flip[0, :] = 0
    flip[:, 0] = 0
    np.fill_diagonal(flip, 0)
    m ^= flip
    if m[1, 2]:
        off = ~np.eye(s.k + 1, dtype=bool)
        off[0, :] = False
        off[:, 0] = False
        m[off] ^= 1
    return pack_state(StandardSigma(k=s.k, nmod4=s.nmod4, upper=np.triu(m, 1)))


# ---------------------------------------------------------------------------
# compiled generators for breadth-first search


@dataclass(frozen=True)
class _Generator:
    """One group generator as a bit rearrangement of packed states.

    out = (s & keep) | moved bits, then ^ xmask, then complemented when the
    relabelled (1,2) entry (bit d_src, xor d_const) is 1.
    """

    keep: int
    moved: tuple  # ((src, dst), ...)
    xmask: int
    d_src: int  # -1 when the bit is constant
    d_const: int
    full: int

    def apply_int(self, word: int) -> int:
        out = word & self.keep
        for src, dst in self.moved:
            out |= ((word >> src) & 1) << dst
        out ^= self.xmask
        d = self.d_const ^ ((word >> self.d_src) & 1 if self.d_src >= 0 else 0)
        return out ^ (self.full if d else 0)

    def apply(self, words: np.ndarray) -> np.ndarray:
        out = words & np.uint64(self.keep)
        one = np.uint64(1)
        for src, dst in self.moved:
            out |= ((words >> np.uint64(src)) & one) << np.uint64(dst)
        out ^= np.uint64(self.xmask)
        if self.d_src >= 0:
            d = ((words >> np.uint64(self.d_src)) & one) ^ np.uint64(self.d_const)
            out ^= d * np.uint64(self.full)
        elif self.d_const:
            out ^= np.uint64(self.full)
        return out


def _compile_permutation(k: int, nmod4: int, g: tuple) -> _Generator:
    kk = binom2_bit(nmod4)
    pos = _bit_positions(k)
    full = (1 << (k * (k - 1) // 2 - 1)) - 1
    ginv = [0] * (k + 1)
    for i, gi in enumerate(g, start=1):
        ginv[gi] = i

    def source(a, b):
        s1, s2 = ginv[a], ginv[b]
        const = 0
        if s1 > s2:
            s1, s2 = s2, s1
            const = kk
        if (s1, s2) == (1, 2):
            return None, const
        return pos[(s1, s2)], const

    keep = 0
    xmask = 0
    moved = []
    for (a, b), dst in pos.items():
        src, const = source(a, b)
        if const:
            xmask |= 1 << dst
        if src is None:
            continue
        if src == dst:
            keep |= 1 << dst
        else:
            moved.append((src, dst))
    d_src, d_const = source(1, 2)
    return _Generator(
        keep=keep,
        moved=tuple(moved),
        xmask=xmask,
        d_src=-1 if d_src is None else d_src,
        d_const=d_const,
        full=full,
    )


def _compile_swap(k: int, nmod4: int, t: int) -> _Generator:
    pos = _bit_positions(k)
    full = (1 << (k * (k - 1) // 2 - 1)) - 1
    xmask = 0
    for (a, b), p in pos.items():
        if (a == t) != (b == t):
            xmask |= 1 << p
    if t in (1, 2):  # the flipped (1,2) entry forces re-standardisation
        xmask ^= full
    return _Generator(keep=full, moved=(), xmask=xmask, d_src=-1, d_const=0, full=full)


def _generators(k: int, nmod4: int) -> list[_Generator]:
    gens = []
    for t in range(1, k):
        g = list(range(1, k + 1))
        g[t - 1], g[t] = g[t], g[t - 1]
        gens.append(_compile_permutation(k, nmod4, tuple(g)))
    if nmod4 % 2 == 1:
        for t in range(1, k + 1):
            gens.append(_compile_swap(k, nmod4, t))
    return gens


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitSummary:
    size: int
    canonical: ParityState


def _orbit_bound(k: int, nmod4: int) -> int:
    bound = math.factorial(k)
    if nmod4 % 2 == 1:
        bound *= 1 << (k - 1)
    return bound


def _budget_bytes() -> int:
    mb = int(os.environ.get(_BUDGET_ENV, _DEFAULT_BUDGET_MB))
    return mb << 20


def _orbit_bitmap(seed: int, gens, visited: np.ndarray) -> tuple[int, int]:
    """BFS one orbit on a dense visited map; returns (size, canonical word)."""
    visited[seed] = True
    frontier = np.array([seed], dtype=np.uint64)
    size = 1
    canonical = seed
    while frontier.size:
        imgs = np.concatenate([g.apply(frontier) for g in gens])
        imgs = imgs[~visited[imgs]]
        if imgs.size == 0:
            break
        imgs = np.unique(imgs)
        visited[imgs] = True
        size += imgs.size
        canonical = min(canonical, int(imgs[0]))
        frontier = imgs
    return size, canonical


def _orbit_sorted(seed: int, gens, budget: int) -> tuple[int, int]:
    """BFS one orbit keeping a sorted array of visited 64-bit words."""
    visited = np.array([seed], dtype=np.uint64)
    frontier = visited
    while frontier.size:
        imgs = np.unique(np.concatenate([g.apply(frontier) for g in gens]))
        pos = np.searchsorted(visited, imgs)
        pos[pos == len(visited)] = len(visited) - 1
        new = imgs[visited[pos] != imgs]
        if new.size == 0:
            break
        if (visited.nbytes + new.nbytes) * 3 > budget:
            raise ResourceLimitError(
                f"orbit exceeded the memory budget ({budget >> 20} MiB); "
                f"raise it via {_BUDGET_ENV}"
            )
        visited = np.sort(np.concatenate([visited, new]))
        frontier = new
    return int(visited.size), int(visited[0])


def orbit(s: ParityState) -> OrbitSummary:
    """Size and canonical representative of the switching class of s.

    The size is checked against the divisibility bound (k! for even n,
    k! * 2^(k-1) for odd n).
    """
    if s.nbits > 63:
        raise OAError(f"orbit search packs states into 64-bit words (k <= 11, got k={s.k})")
    gens = _generators(s.k, s.nmod4)
    b = s.nbits
    if (1 << b) <= _BITMAP_LIMIT:
        visited = np.zeros(1 << b, dtype=bool)
        size, canonical = _orbit_bitmap(s.word, gens, visited)
    else:
        size, canonical = _orbit_sorted(s.word, gens, _budget_bytes())
    bound = _orbit_bound(s.k, s.nmod4)
    if bound % size:
        raise OAError(f"orbit size {size} does not divide the group order {bound}")
    return OrbitSummary(size=size, canonical=ParityState(k=s.k, nmod4=s.nmod4, word=canonical))


def class_of_oa(a: OrthogonalArray) -> OrbitSummary:
    """The switching class of an orthogonal array's tau-parity."""
    return orbit(state_of_tau(tau_parity(a)))


# ---------------------------------------------------------------------------
# full enumeration


@dataclass(frozen=True)
class ClassTable:
    """Orbit-size census of the whole plausible-parity space for (k, n mod 4)."""

    k: int
    nmod4: int
    entries: tuple  # ((size, count), ...) ascending by size
    total_classes: int
    total_states: int

    @property
    def sizes(self) -> tuple:
        return tuple(size for size, _ in self.entries)


def _next_unvisited(visited: np.ndarray, start: int, chunk: int = 1 << 16) -> int:
    """First False at or after ``start``; len(visited) when none remains."""
    total = len(visited)
    pos = start
    while pos < total:
        sub = visited[pos:pos + chunk]
        idx = int(np.argmin(sub))
        if not sub[idx]:
            return pos + idx
        pos += len(sub)
    return total


def enumerate_classes(k: int, nmod4: int) -> ClassTable:
    """Partition all 2^(C(k,2)-1) states into switching classes, k <= 8."""
    if not 3 <= k <= 8:
        raise OAError(
            f"full enumeration supports 3 <= k <= 8 (got k={k}); "
            "use orbit() for individual states at larger k"
        )
    gens = _generators(k, nmod4)
    b = k * (k - 1) // 2 - 1
    total = 1 << b
    visited = np.zeros(total, dtype=bool)
    bound = _orbit_bound(k, nmod4)
    sizes: dict[int, int] = {}
    seed = 0
    nclasses = 0
    while True:
        seed = _next_unvisited(visited, seed)
        if seed >= total:
            break
        size, _ = _orbit_bitmap(seed, gens, visited)
        if bound % size:
            raise OAError(f"orbit size {size} does not divide the group order {bound}")
        sizes[size] = sizes.get(size, 0) + 1
        nclasses += 1
        seed += 1
    entries = tuple(sorted(sizes.items()))
    counted = sum(size * count for size, count in entries)
    if counted != total:
        raise OAError(f"orbit sizes account for {counted} of {total} states")
    return ClassTable(
        k=k,
        nmod4=nmod4 % 4,
        entries=entries,
        total_classes=nclasses,
        total_states=total,
    )
