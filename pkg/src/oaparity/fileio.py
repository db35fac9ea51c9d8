"""File formats: arrays, squares, sigma data, parity reports, catalogues.

Text formats (whitespace-separated integers, ``base`` is 0 or 1 and shifts
symbols on input/output):

    OA k n base          LS n base            MOLSSET label n count base
    <n^2 rows of k>      <n rows of n>        <count squares, n rows each>

A file may also hold the JSON mirror of an array or square (detected by a
leading '{'); sigma data and parity reports are JSON only.  Every emitted
file re-parses to an identical value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import LatinSquare, OAError, OrthogonalArray, mols_to_oa
from .parity import (
    SigmaMatrix,
    StandardSigma,
    TauVector,
    check_plausible,
    sigma_from_tau,
    tau_from_sigma,
    tau_parity,
)


class FormatError(OAError):
    """Malformed file; carries the offending 1-based line number."""

    def __init__(self, msg: str, line: int | None = None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line.split()


def _parse_ints(fields, lineno):
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise FormatError(f"expected integers, got {fields!r}", lineno) from None


def _shift(values, base, lineno):
    if base not in (0, 1):
        raise FormatError(f"base must be 0 or 1, got {base}", lineno)
    return [v - base for v in values]


# ---------------------------------------------------------------------------
# orthogonal arrays


def parse_oa(text: str) -> OrthogonalArray:
    if text.lstrip().startswith("{"):
        return oa_from_json(json.loads(text))
    lines = _tokens(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("empty file", 1) from None
    if len(header) != 4 or header[0] != "OA":
        raise FormatError("header must be 'OA k n base'", lineno)
    k, n, base = _parse_ints(header[1:], lineno)
    rows = []
    for lineno, fields in lines:
        if len(fields) != k:
            raise FormatError(f"expected {k} symbols per row", lineno)
        rows.append(_shift(_parse_ints(fields, lineno), base, lineno))
    if len(rows) != n * n:
        raise FormatError(f"expected {n * n} rows, got {len(rows)}")
    a = OrthogonalArray(rows)
    if a.n != n:
        raise FormatError(f"rows imply order {a.n}, header says {n}")
    return a


def format_oa(a: OrthogonalArray, base: int = 0) -> str:
    lines = [f"OA {a.k} {a.n} {base}"]
    for row in a.rows:
        lines.append(" ".join(str(int(x) + base) for x in row))
    return "\n".join(lines) + "\n"


def oa_to_json(a: OrthogonalArray, base: int = 0) -> dict:
    return {
        "kind": "oa",
        "k": a.k,
        "n": a.n,
        "base": base,
        "rows": (a.rows + base).tolist(),
    }


def oa_from_json(obj: dict) -> OrthogonalArray:
    if obj.get("kind") != "oa":
        raise FormatError(f"expected kind 'oa', got {obj.get('kind')!r}")
    base = obj.get("base", 0)
    rows = np.asarray(obj["rows"], dtype=np.int16) - base
    return OrthogonalArray(rows)


# ---------------------------------------------------------------------------
# Latin squares


def parse_square(text: str) -> LatinSquare:
    if text.lstrip().startswith("{"):
        return square_from_json(json.loads(text))
    lines = _tokens(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("empty file", 1) from None
    if len(header) != 3 or header[0] != "LS":
        raise FormatError("header must be 'LS n base'", lineno)
    n, base = _parse_ints(header[1:], lineno)
    cells = []
    for lineno, fields in lines:
        if len(fields) != n:
            raise FormatError(f"expected {n} symbols per row", lineno)
        cells.append(_shift(_parse_ints(fields, lineno), base, lineno))
    if len(cells) != n:
        raise FormatError(f"expected {n} rows, got {len(cells)}")
    return LatinSquare(cells)


def format_square(square: LatinSquare, base: int = 0) -> str:
    lines = [f"LS {square.n} {base}"]
    for row in square.cells:
        lines.append(" ".join(str(int(x) + base) for x in row))
    return "\n".join(lines) + "\n"


def square_to_json(square: LatinSquare, base: int = 0) -> dict:
    return {
        "kind": "latin_square",
        "n": square.n,
        "base": base,
        "cells": (square.cells + base).tolist(),
    }


def square_from_json(obj: dict) -> LatinSquare:
    if obj.get("kind") != "latin_square":
        raise FormatError(f"expected kind 'latin_square', got {obj.get('kind')!r}")
    base = obj.get("base", 0)
    return LatinSquare(np.asarray(obj["cells"], dtype=np.int16) - base)


# ---------------------------------------------------------------------------
# sigma data


def sigma_to_json(s: SigmaMatrix | StandardSigma, seed: int | None = None) -> dict:
    full = s.to_matrix() if isinstance(s, StandardSigma) else s
    obj = {
        "kind": "sigma",
        "k": full.k,
        "nmod4": full.nmod4,
        "n": full.n,
        "upper": [
            [i, j, int(full.m[i, j])]
            for i in range(1, full.k + 1)
            for j in range(i + 1, full.k + 1)
        ],
    }
    if seed is not None:
        obj["seed"] = seed
    return obj


def sigma_from_json(obj: dict) -> SigmaMatrix:
    if obj.get("kind") != "sigma":
        raise FormatError(f"expected kind 'sigma', got {obj.get('kind')!r}")
    k = int(obj["k"])
    nmod4 = int(obj["nmod4"])
    from .parity import binom2_bit

    kk = binom2_bit(nmod4)
    m = np.zeros((k + 1, k + 1), dtype=np.uint8)
    for i, j, bit in obj["upper"]:
        if not 1 <= i < j <= k:
            raise FormatError(f"bad pair ({i}, {j}) in sigma data")
        m[i, j] = bit & 1
        m[j, i] = (bit & 1) ^ kk
    n = obj.get("n")
    return SigmaMatrix(k=k, nmod4=nmod4, m=m, n=None if n is None else int(n))


# ---------------------------------------------------------------------------
# parity reports


def parity_report(source: OrthogonalArray | TauVector) -> dict:
    """The canonical JSON report: tau entries, standardised sigma pairs,
    plausibility flags."""
    tau = tau_parity(source) if isinstance(source, OrthogonalArray) else source
    rep = check_plausible(tau)
    obj = {
        "k": tau.k,
        "n": tau.n,
        "nmod4": tau.nmod4,
        "tau": [list(e) for e in tau.entries()],
        "plausible": rep.plausible,
        "pp_plausible": rep.pp_plausible,
    }
    if rep.plausible:
        obj["sigma_standard"] = [list(p) for p in sigma_from_tau(tau).pairs()]
    else:
        obj["sigma_standard"] = None
        obj["violations"] = [[kind, list(w)] for kind, w in rep.violations]
    return obj


def tau_from_report(obj: dict) -> TauVector:
    k = int(obj["k"])
    nmod4 = int(obj["nmod4"])
    n = obj.get("n")
    return TauVector.from_entries(
        k, nmod4, [tuple(e) for e in obj["tau"]], n=None if n is None else int(n)
    )


def load_tau(path) -> TauVector:
    """Read a tau vector from a parity report or a sigma JSON file."""
    obj = json.loads(Path(path).read_text())
    if obj.get("kind") == "sigma":
        return tau_from_sigma(sigma_from_json(obj))
    if "tau" in obj:
        return tau_from_report(obj)
    raise FormatError("file holds neither sigma data nor a parity report")


# ---------------------------------------------------------------------------
# catalogues of MOLS sets


@dataclass(frozen=True)
class CatalogueEntry:
    """One named set of MOLS read from a catalogue file."""

    label: str
    squares: tuple
    provenance: str

    @property
    def n(self) -> int:
        return self.squares[0].n

    def to_oa(self) -> OrthogonalArray:
        return mols_to_oa(list(self.squares))


def parse_catalogue(text: str, provenance: str = "<memory>") -> list[CatalogueEntry]:
    entries = []
    lines = list(_tokens(text))
    pos = 0
    while pos < len(lines):
        lineno, fields = lines[pos]
        if fields[0] != "MOLSSET" or len(fields) != 5:
            raise FormatError("expected 'MOLSSET label n count base'", lineno)
        label = fields[1]
        n, count, base = _parse_ints(fields[2:], lineno)
        pos += 1
        squares = []
        for s in range(count):
            cells = []
            for r in range(n):
                if pos >= len(lines):
                    raise FormatError(
                        f"set {label!r}: file ended inside square {s + 1}", lineno
                    )
                rowline, row = lines[pos]
                if len(row) != n:
                    raise FormatError(f"expected {n} symbols per row", rowline)
                cells.append(_shift(_parse_ints(row, rowline), base, rowline))
                pos += 1
            try:
                squares.append(LatinSquare(cells))
            except OAError as exc:
                raise FormatError(f"set {label!r}, square {s + 1}: {exc}", lineno) from None
        entry = CatalogueEntry(
            label=label, squares=tuple(squares), provenance=f"{provenance}:{lineno}"
        )
        entry.to_oa()  # orthogonality check; raises naming the offending pair
        entries.append(entry)
    return entries


def ingest_catalogue(path) -> list[CatalogueEntry]:
    """Parse and validate a catalogue file of MOLS sets."""
    p = Path(path)
    return parse_catalogue(p.read_text(), provenance=str(p))


def format_catalogue_entry(label: str, squares, base: int = 0) -> str:
    squares = list(squares)
    n = squares[0].n
    lines = [f"MOLSSET {label} {n} {len(squares)} {base}"]
    for sq in squares:
        for row in sq.cells:
            lines.append(" ".join(str(int(x) + base) for x in row))
    return "\n".join(lines) + "\n"
