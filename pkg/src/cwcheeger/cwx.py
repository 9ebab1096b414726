"""Reading and writing the ``cwx`` text format and simplicial facet lists.

cwx::

    cwx 1
    dim D
    regular 0|1                 # optional, default 0
    cells N COUNT               # once for each 0 <= N <= D
    inc N MU LAMBDA COEFF       # [e_LAMBDA^N : e_MU^(N-1)]; omitted entries are 0
    label N INDEX TEXT          # optional

Facet files hold one facet per line as whitespace-separated vertex ids.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .complex import CWComplex, Violation, from_simplicial
from .errors import ComplexValidationError, ParseError

HEADER = "cwx 1"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def is_cwx(text: str) -> bool:
    first = next(_content_lines(text), None)
    return first is not None and first[1].split() == HEADER.split()


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: expected an integer, got {tok!r}") from None


def parse_cwx(text: str) -> CWComplex:
    lines = list(_content_lines(text))
    if not lines or lines[0][1].split() != HEADER.split():
        raise ParseError("line 1: missing 'cwx 1' header")
    dim = None
    regular = False
    counts: dict[int, int] = {}
    entries: dict[tuple[int, int, int], int] = {}
    labels: dict[tuple[int, int], str] = {}
    for lineno, line in lines[1:]:
        key, *rest = line.split()
        if key == "dim":
            if dim is not None or len(rest) != 1:
                raise ParseError(f"line {lineno}: expected a single 'dim D'")
            dim = _int(rest[0], lineno)
            if dim < 0:
                raise ParseError(f"line {lineno}: negative dimension")
            continue
        if dim is None:
            raise ParseError(f"line {lineno}: '{key}' before 'dim'")
        if key == "regular":
            if len(rest) != 1 or rest[0] not in ("0", "1"):
                raise ParseError(f"line {lineno}: expected 'regular 0' or 'regular 1'")
            regular = rest[0] == "1"
        elif key == "cells":
            if len(rest) != 2:
                raise ParseError(f"line {lineno}: expected 'cells N COUNT'")
            n, c = (_int(t, lineno) for t in rest)
            if not 0 <= n <= dim or c < 0 or n in counts:
                raise ParseError(f"line {lineno}: bad or repeated 'cells {n} {c}'")
            counts[n] = c
        elif key == "inc":
            if len(rest) != 4:
                raise ParseError(f"line {lineno}: expected 'inc N MU LAMBDA COEFF'")
            n, mu, lam, coeff = (_int(t, lineno) for t in rest)
            if (n, mu, lam) in entries:
                raise ParseError(f"line {lineno}: repeated incidence entry ({n}, {mu}, {lam})")
            entries[(n, mu, lam)] = coeff
        elif key == "label":
            if len(rest) < 3:
                raise ParseError(f"line {lineno}: expected 'label N INDEX TEXT'")
            labels[(_int(rest[0], lineno), _int(rest[1], lineno))] = " ".join(rest[2:])
        else:
            raise ParseError(f"line {lineno}: unknown directive {key!r}")
    if dim is None:
        raise ParseError("missing 'dim' line")
    missing = [n for n in range(dim + 1) if n not in counts]
    if missing:
        raise ParseError(f"missing 'cells' line for dimension(s) {missing}")
    cell_counts = [counts[n] for n in range(dim + 1)]

    violations = []
    mats = [np.zeros((cell_counts[n - 1], cell_counts[n]), dtype=np.int64) for n in range(1, dim + 1)]
    for (n, mu, lam), coeff in entries.items():
        if not 1 <= n <= dim:
            violations.append(Violation("index-range", n, mu, lam, f"dimension {n} outside 1..{dim}"))
        elif not (0 <= mu < cell_counts[n - 1] and 0 <= lam < cell_counts[n]):
            violations.append(Violation("index-range", n, mu, lam, "cell index out of range"))
        else:
            mats[n - 1][mu, lam] = coeff
    label_table = None
    if labels:
        label_table = [[None] * c for c in cell_counts]
        for (n, idx), text in labels.items():
            if not (0 <= n <= dim and 0 <= idx < cell_counts[n]):
                violations.append(Violation("index-range", n, idx, None, "label for a missing cell"))
                continue
            label_table[n][idx] = text
    if violations:
        raise ComplexValidationError("; ".join(map(str, violations)), violations)
    return CWComplex(tuple(cell_counts), tuple(mats), label_table, regular)


def to_cwx(complex_: CWComplex) -> str:
    out = [HEADER, f"dim {complex_.dim}", f"regular {int(complex_.regular_asserted)}"]
    out += [f"cells {n} {c}" for n, c in enumerate(complex_.cell_counts)]
    for n in range(1, complex_.dim + 1):
        a = complex_.inc(n)
        for lam in range(a.shape[1]):
            for mu in np.flatnonzero(a[:, lam]):
                out.append(f"inc {n} {mu} {lam} {a[mu, lam]}")
    if complex_.labels is not None:
        for n, row in enumerate(complex_.labels):
            for idx, text in enumerate(row):
                if text is not None:
                    out.append(f"label {n} {idx} {text}")
    return "\n".join(out) + "\n"


def parse_facets_text(text: str) -> list[list]:
    """Facets as vertex lists; ids are ints when every token is an integer, else strings."""
    facets = [line.split() for _, line in _content_lines(text)]
    if not facets:
        raise ParseError("no facets found")
    try:
        return [[int(t) for t in toks] for toks in facets]
    except ValueError:
        return facets


def loads(text: str) -> CWComplex:
    """Parse either format, sniffing the ``cwx 1`` header."""
    if is_cwx(text):
        return parse_cwx(text)
    try:
        return from_simplicial(parse_facets_text(text))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def load(path) -> CWComplex:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads(text)
