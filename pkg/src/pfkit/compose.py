"""Gluing two polytopes along a vertex relation.

Given ``P1`` in R^{n1} x R^{d1} (coordinates ``(alpha, x)``), ``P2`` in
R^{n2} x R^{d2} (coordinates ``(beta, y)``) and a finite table ``f`` on
pairs of projection vertices, the target polytope is::

    conv{(f(alpha, beta), x, y) : (alpha, x) in vert P1, (beta, y) in vert P2}

over the pairs where ``f`` is defined.  ``build_q`` writes down an extended
formulation in the coordinates ``(gamma, alpha, x, beta, y)``; it is exact
whenever both factors have the projected-faces property and the gluing
polytope ``P3`` maps vertices to vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .exactla import QVector, dot, vector
from .polytope import (
    EmptyPolytopeError,
    HRep,
    Polytope,
    embed_rows,
    equal,
    from_points,
    make_polytope,
    permute,
    project,
)
from .pfp import check_pf, vertices_project_to_vertices


class TheoremViolation(AssertionError):
    """The gluing hypotheses hold but a conclusion fails; this is a bug."""


@dataclass(frozen=True)
class Split:
    n1: int
    d1: int
    n2: int
    d2: int
    n: int

    @property
    def total(self) -> int:
        return self.n + self.n1 + self.d1 + self.n2 + self.d2

    def as_dict(self) -> dict[str, int]:
        return {"n1": self.n1, "d1": self.d1, "n2": self.n2, "d2": self.d2, "n": self.n}


@dataclass(frozen=True)
class Blocks:
    """Index lists of each coordinate block of Q."""

    gamma: list[int]
    alpha: list[int]
    x: list[int]
    beta: list[int]
    y: list[int]

    @property
    def p1(self) -> list[int]:
        return self.alpha + self.x

    @property
    def p2(self) -> list[int]:
        return self.beta + self.y

    @property
    def p3(self) -> list[int]:
        return self.gamma + self.alpha + self.beta

    @property
    def target(self) -> list[int]:
        return self.gamma + self.x + self.y


def q_blocks(split: Split) -> Blocks:
    sizes = [split.n, split.n1, split.d1, split.n2, split.d2]
    out, start = [], 0
    for k in sizes:
        out.append(list(range(start, start + k)))
        start += k
    return Blocks(*out)


@dataclass(frozen=True)
class CompositionInput:
    p1: Polytope
    p2: Polytope
    split: Split
    f: Mapping[tuple[QVector, QVector], QVector] = field(hash=False)

    def __post_init__(self):
        s = self.split
        if min(s.n1, s.n2, s.n) < 1 or min(s.d1, s.d2) < 0:
            raise ValueError("split sizes must be positive (d1, d2 may be zero)")
        if self.p1.ambient_dim != s.n1 + s.d1 or self.p2.ambient_dim != s.n2 + s.d2:
            raise ValueError("polytope dimensions do not match the split")
        if not self.f:
            raise ValueError("f defines no pair")
        table = {(vector(a), vector(b)): vector(g) for (a, b), g in self.f.items()}
        va = project(self.p1, range(s.n1)).vertex_index
        vb = project(self.p2, range(s.n2)).vertex_index
        for (a, b), g in table.items():
            if a not in va or b not in vb:
                raise ValueError("f keys must be pairs of projection vertices")
            if len(g) != s.n:
                raise ValueError("f values must lie in R^n")
        object.__setattr__(self, "f", table)


@dataclass(frozen=True)
class Hypotheses:
    pf_p1: bool
    pf_p2: bool
    p3_vertex_projection: bool

    @property
    def all(self) -> bool:
        return self.pf_p1 and self.pf_p2 and self.p3_vertex_projection


@dataclass(frozen=True)
class CompositionReport:
    hypotheses: Hypotheses
    conclusion_a: bool
    conclusion_b: bool
    q: Polytope
    p3: Polytope
    p_target: Polytope


def build_p3(inp: CompositionInput) -> Polytope:
    return from_points([g + a + b for (a, b), g in inp.f.items()], inp.split.n + inp.split.n1 + inp.split.n2)


def _implied(keep: HRep, row) -> bool:
    try:
        p = make_polytope(keep)
    except EmptyPolytopeError:
        return False
    a, b = row
    return all(dot(a, v) <= b for v in p.vertices)


def build_q(inp: CompositionInput, prune_implied: bool = False) -> Polytope:
    """The glued system in coordinates ``(gamma, alpha, x, beta, y)``.

    With ``prune_implied`` the inequalities of ``P3`` that the rest of the
    system already implies are left out, one at a time in order.
    """
    s = inp.split
    blocks = q_blocks(s)
    total = s.total
    p3 = build_p3(inp)
    ineqs = embed_rows(inp.p1.system.inequalities, blocks.p1, total)
    ineqs += embed_rows(inp.p2.system.inequalities, blocks.p2, total)
    eqs = embed_rows(inp.p1.system.equations, blocks.p1, total)
    eqs += embed_rows(inp.p2.system.equations, blocks.p2, total)
    eqs += embed_rows(p3.system.equations, blocks.p3, total)
    glue = embed_rows(p3.system.inequalities, blocks.p3, total)
    if prune_implied:
        kept = []
        for i, row in enumerate(glue):
            rest = HRep(tuple(ineqs + kept + glue[i + 1 :]), tuple(eqs), total)
            if not _implied(rest, row):
                kept.append(row)
        glue = kept
    return make_polytope(HRep(tuple(ineqs + glue), tuple(eqs), total))


def target_polytope(inp: CompositionInput) -> Polytope:
    """Direct enumeration of the glued vertex pairs, in ``(gamma, x, y)`` coordinates."""
    s = inp.split
    pts = []
    for v in inp.p1.vertices:
        for w in inp.p2.vertices:
            g = inp.f.get((v[: s.n1], w[: s.n2]))
            if g is not None:
                pts.append(g + v[s.n1 :] + w[s.n2 :])
    if not pts:
        raise ValueError("f is defined on no pair of polytope vertices")
    return from_points(pts, s.n + s.d1 + s.d2)


def verify_composition(inp: CompositionInput, q: Polytope | None = None) -> CompositionReport:
    """Check the hypotheses and both conclusions; conclusions are computed regardless."""
    s = inp.split
    blocks = q_blocks(s)
    p3 = build_p3(inp)
    hyp = Hypotheses(
        pf_p1=check_pf(inp.p1, range(s.n1)).holds,
        pf_p2=check_pf(inp.p2, range(s.n2)).holds,
        p3_vertex_projection=vertices_project_to_vertices(p3, range(s.n)),
    )
    q = build_q(inp) if q is None else q
    target = target_polytope(inp)
    conclusion_a = equal(project(q, blocks.target), target)
    conclusion_b = check_pf(q, blocks.p3).holds
    if hyp.all and not (conclusion_a and conclusion_b):
        raise TheoremViolation("theorem violated (implementation bug)")
    return CompositionReport(hyp, conclusion_a, conclusion_b, q, p3, target)


# ---------------------------------------------------------------------------
# chaining


def move_to_front(p: Polytope, front: Sequence[int], tracked: Sequence[int] = ()) -> tuple[Polytope, list[int]]:
    """Permute ``front`` to the leading coordinates; returns where ``tracked`` went."""
    front = list(front)
    order = front + [c for c in range(p.ambient_dim) if c not in front]
    where = {old: new for new, old in enumerate(order)}
    return permute(p, order), [where[c] for c in tracked]


@dataclass(frozen=True)
class ChainState:
    """An extended formulation together with its projection coordinates."""

    polytope: Polytope
    outputs: list[int]


@dataclass(frozen=True)
class Step:
    """One gluing step; ``outputs`` are the projection coordinates inside Q."""

    input: CompositionInput
    outputs: list[int]


@dataclass(frozen=True)
class ChainResult:
    polytope: Polytope
    outputs: list[int]
    reports: list[CompositionReport]


Builder = Callable[[ChainState | None], Step]


def chain(builders: Sequence[Builder], verify: bool = True, prune_implied: bool = True) -> ChainResult:
    """Apply gluing steps in order, feeding each Q to the next builder."""
    if not builders:
        raise ValueError("empty chain")
    state: ChainState | None = None
    reports = []
    for k, build in enumerate(builders, start=1):
        step = build(state)
        q = build_q(step.input, prune_implied=prune_implied)
        if verify:
            report = verify_composition(step.input, q)
            if not report.hypotheses.all:
                raise ValueError(f"chain step {k}: hypotheses do not hold ({report.hypotheses})")
            reports.append(report)
        state = ChainState(q, list(step.outputs))
    return ChainResult(state.polytope, state.outputs, reports)
