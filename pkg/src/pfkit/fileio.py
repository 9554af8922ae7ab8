"""Text formats: polytope files, generator blocks, certificates and f-tables.

Polytope files follow the cdd layout::

    # comment
    H-representation
    ambient 3
    linearity 1 2
    begin
    0 1 -1 -1
    ...
    end

H rows are ``rhs a1 .. an`` meaning ``a . z <= rhs``; rows listed under
``linearity`` (1-based) are equations.  V rows are plain points.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .exactla import QVector, format_rational, integer_row, parse_rational
from .polytope import HRep, Polytope, VRep

_SPLIT_KEYS = ("n1", "d1", "n2", "d2", "n")


class FormatError(ValueError):
    pass


def _tokens(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


def _fmt_row(values: Iterable) -> str:
    return " ".join(format_rational(v) for v in values)


def parse_polytope_text(text: str) -> HRep | VRep:
    kind = None
    n = None
    linearity: set[int] = set()
    rows: list[list[Fraction]] = []
    state = "header"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = _tokens(raw)
        if not tok:
            continue
        try:
            if state == "header":
                head = tok[0]
                if head in ("H-representation", "V-representation"):
                    kind = head[0]
                elif head == "ambient":
                    n = int(tok[1])
                elif head == "linearity":
                    k = int(tok[1])
                    idx = [int(t) for t in tok[2:]]
                    if len(idx) != k:
                        raise FormatError("linearity count does not match its index list")
                    linearity = set(idx)
                elif head == "begin":
                    state = "rows"
                else:
                    raise FormatError(f"unexpected header line {raw.strip()!r}")
            elif state == "rows":
                if tok[0] == "end":
                    state = "done"
                else:
                    rows.append([parse_rational(t) for t in tok])
            else:
                raise FormatError("content after 'end'")
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    if kind is None or n is None:
        raise FormatError("missing representation kind or ambient dimension")
    if state != "done":
        raise FormatError("missing 'end'")
    width = n if kind == "V" else n + 1
    if any(len(r) != width for r in rows):
        raise FormatError(f"every row must have {width} entries")
    if kind == "V":
        if linearity:
            raise FormatError("linearity is only allowed in H-representations")
        return VRep(tuple(tuple(r) for r in rows), n)
    if any(not 1 <= i <= len(rows) for i in linearity):
        raise FormatError("linearity index out of range")
    ineqs, eqs = [], []
    for i, r in enumerate(rows, start=1):
        (eqs if i in linearity else ineqs).append((tuple(r[1:]), r[0]))
    return HRep(tuple(ineqs), tuple(eqs), n)


def format_hrep(h: HRep, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines += ["H-representation", f"ambient {h.ambient_dim}"]
    if h.equations:
        idx = range(len(h.inequalities) + 1, len(h.inequalities) + len(h.equations) + 1)
        lines.append(f"linearity {len(h.equations)} " + " ".join(map(str, idx)))
    lines.append("begin")
    for a, b in list(h.inequalities) + list(h.equations):
        lines.append(_fmt_row((b, *a)))
    lines.append("end")
    return "\n".join(lines) + "\n"


def format_vrep(v: VRep, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines += ["V-representation", f"ambient {v.ambient_dim}", "begin"]
    lines += [_fmt_row(p) for p in v.points]
    lines.append("end")
    return "\n".join(lines) + "\n"


def format_system(h: HRep, comment: str | None = None) -> str:
    """A construction system with each row scaled to coprime integers."""

    def scaled(rows):
        out = []
        for a, b in rows:
            ints = integer_row((b, *a))
            out.append((tuple(Fraction(x) for x in ints[1:]), Fraction(ints[0])))
        return tuple(out)

    return format_hrep(HRep(scaled(h.inequalities), scaled(h.equations), h.ambient_dim), comment)


def read_polytope_file(path: str | Path) -> HRep | VRep:
    return parse_polytope_text(Path(path).read_text())


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)


def polytope_text(p: Polytope, rep: str = "hrep", comment: str | None = None) -> str:
    if rep == "hrep":
        return format_hrep(p.hrep, comment)
    if rep == "vrep":
        return format_vrep(p.vrep, comment)
    raise ValueError(f"unknown representation {rep!r}")


# ---------------------------------------------------------------------------
# generators and certificates


def format_generators(gens) -> str:
    lines = [f"# maps R^{gens.n} -> R^{gens.d}"]
    for m in gens.maps:
        linear = [format_rational(x) for row in m.linear for x in row]
        offset = [format_rational(x) for x in m.offset]
        lines.append(" ".join(["ρ:", *linear, "|", *offset]))
    return "\n".join(lines) + "\n"


def parse_generators(text: str, n: int, d: int):
    from .pfp import AffineGeneratorSet, AffineMap

    maps = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep or head.strip() not in ("ρ", "rho"):
            raise FormatError(f"not a map line: {raw!r}")
        left, bar, right = rest.partition("|")
        if not bar:
            raise FormatError(f"missing '|' in {raw!r}")
        flat = [parse_rational(t) for t in left.split()]
        offset = tuple(parse_rational(t) for t in right.split())
        if len(flat) != n * d or len(offset) != d:
            raise FormatError(f"map has the wrong shape for R^{n} -> R^{d}")
        linear = tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(d))
        maps.append(AffineMap(linear, offset))
    return AffineGeneratorSet(tuple(maps), n, d)


def format_certificate(cert, coords: Sequence[int]) -> str:
    lines = [
        "# Radon certificate: u lies in conv(S) and conv(W1); the subset equation fails for S",
        "coords " + ",".join(map(str, coords)),
        "u " + _fmt_row(cert.u),
    ]
    lines += ["S " + _fmt_row(x) for x in cert.s]
    lines += ["W1 " + _fmt_row(x) for x in cert.w1]
    lines.append("face " + " ".join(map(str, cert.face.vertex_indices)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# f-tables


@dataclass(frozen=True)
class FTable:
    split: dict[str, int]
    table: dict[tuple[QVector, QVector], QVector]


def _vec(text: str) -> QVector:
    return tuple(parse_rational(t) for t in text.split())


def parse_ftable(text: str) -> FTable:
    split = None
    table: dict[tuple[QVector, QVector], QVector] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("split"):
                fields = dict(re.findall(r"(\w+)=(\d+)", line))
                if set(fields) != set(_SPLIT_KEYS):
                    raise FormatError("split header needs n1, d1, n2, d2 and n")
                split = {k: int(fields[k]) for k in _SPLIT_KEYS}
                continue
            if split is None:
                raise FormatError("split header must come first")
            lhs, arrow, gamma = line.partition("->")
            alpha, bar, beta = lhs.partition("|")
            if not arrow or not bar:
                raise FormatError("expected '<alpha> | <beta> -> <gamma>'")
            a, b, g = _vec(alpha), _vec(beta), _vec(gamma)
            if (len(a), len(b), len(g)) != (split["n1"], split["n2"], split["n"]):
                raise FormatError("entry does not match the split")
            if (a, b) in table and table[(a, b)] != g:
                raise FormatError("conflicting values for one pair")
            table[(a, b)] = g
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    if split is None:
        raise FormatError("missing split header")
    if not table:
        raise FormatError("f-table defines no pair")
    return FTable(split, table)


def format_ftable(split: dict[str, int], table: dict) -> str:
    lines = ["split " + " ".join(f"{k}={split[k]}" for k in _SPLIT_KEYS)]
    for (a, b), g in sorted(table.items()):
        lines.append(f"{_fmt_row(a)} | {_fmt_row(b)} -> {_fmt_row(g)}")
    return "\n".join(lines) + "\n"
