"""Command-line front end.

Every subcommand prints a report (``key=value`` lines, or one JSON object
with ``--json``) and exits with 0 for ok, 1 for a negative verdict and 2
for bad input or an exceeded cap.  Coordinate lists are 0-based and
comma-separated.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import fileio, models
from .compose import CompositionInput, Split, build_q, q_blocks, verify_composition
from .config import caps_override
from .exactla import format_rational
from .pfp import PFFailure, affine_generators, check_pf, radon_certificate
from .polytope import make_polytope

EXIT = {"ok": 0, "fail": 1, "error": 2}


@dataclass
class RunReport:
    command: str
    status: str = "ok"
    payload: dict = field(default_factory=dict)
    wall_time_ms: int = 0

    def render(self, as_json: bool) -> str:
        if as_json:
            doc = {"command": self.command, "status": self.status, **self.payload, "wall_time_ms": self.wall_time_ms}
            return json.dumps(doc, sort_keys=False)
        lines = [f"command={self.command}", f"status={self.status}"]
        lines += [f"{k}={_flat(v)}" for k, v in self.payload.items()]
        lines.append(f"wall_time_ms={self.wall_time_ms}")
        return "\n".join(lines)


def _flat(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (list, tuple)):
        return ",".join(_flat(x) for x in v)
    return str(v)


def parse_coords(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise ValueError(f"bad coordinate list {text!r}") from None


def _point(x) -> str:
    return "(" + " ".join(format_rational(v) for v in x) + ")"


def _load(path: str):
    return make_polytope(fileio.read_polytope_file(path))


def _emit(text: str, output: str | None):
    if output:
        fileio.write_text(output, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_convert(args, report: RunReport):
    rep = fileio.read_polytope_file(args.input)
    p = make_polytope(rep)
    text = fileio.polytope_text(p, args.to)
    if args.output is None:
        sys.stdout.write(text)
        report.payload["quiet"] = True
        return
    fileio.write_text(args.output, text)
    report.payload.update(output=args.output, vertices=p.n_vertices, facets=p.n_facets, dim=p.dim)


def cmd_check_pf(args, report: RunReport):
    p = _load(args.input)
    coords = parse_coords(args.coords)
    result = check_pf(p, coords)
    report.payload.update(holds=result.holds, checked_faces=result.checked_faces)
    if result.holds:
        return
    report.status = "fail"
    face = result.witness_face
    report.payload["witness_vertices"] = " ".join(_point(v) for v in face.vertices)
    report.payload["witness_dim"] = face.dim
    if args.certificate:
        cert = radon_certificate(p, coords, face)
        fileio.write_text(args.certificate, fileio.format_certificate(cert, coords))
        report.payload["certificate"] = args.certificate
        report.payload["u"] = _point(cert.u)


def cmd_generators(args, report: RunReport):
    p = _load(args.input)
    coords = parse_coords(args.coords)
    try:
        gens = affine_generators(p, coords)
    except PFFailure as exc:
        report.payload["holds"] = False
        report.payload["witness_vertices"] = " ".join(_point(v) for v in exc.report.witness_face.vertices)
        raise
    _emit(fileio.format_generators(gens), args.output)
    report.payload.update(holds=True, maps=len(gens), n=gens.n, d=gens.d)
    if args.output:
        report.payload["output"] = args.output
    else:
        report.payload["quiet"] = True


def cmd_compose(args, report: RunReport):
    table = fileio.parse_ftable(Path(args.f).read_text())
    split = Split(**table.split)
    inp = CompositionInput(_load(args.p1), _load(args.p2), split, table.table)
    q = build_q(inp, prune_implied=args.prune)
    blocks = q_blocks(split)
    report.payload.update(
        q_ambient=q.ambient_dim,
        q_inequalities=len(q.system.inequalities),
        q_facets=q.n_facets,
        target_coords=blocks.target,
        pf_coords=blocks.p3,
    )
    if args.output:
        fileio.write_text(args.output, fileio.format_system(q.system, "coordinates (gamma, alpha, x, beta, y)"))
        report.payload["output"] = args.output
    if not args.verify:
        return
    res = verify_composition(inp, q)
    h = res.hypotheses
    report.payload.update(
        pf_p1=h.pf_p1,
        pf_p2=h.pf_p2,
        p3_vertex_projection=h.p3_vertex_projection,
        hypotheses_met=h.all,
        conclusion_a=res.conclusion_a,
        conclusion_b=res.conclusion_b,
    )
    if not (h.all and res.conclusion_a and res.conclusion_b):
        report.status = "fail"


def _need_n(args, default=None) -> int:
    if args.n is None:
        if default is None:
            raise ValueError(f"model {args.model_name} needs --n")
        return default
    return args.n


def _need_graph(args):
    if not args.graph:
        raise ValueError(f"model {args.model_name} needs --graph")
    return models.read_graph(args.graph)


def cmd_model(args, report: RunReport):
    name = args.model_name
    comment = f"model {name}"
    if name == "parity":
        text = fileio.polytope_text(models.parity_polytope(_need_n(args)), args.rep, comment)
    elif name == "odd-set":
        n = _need_n(args)
        text = fileio.format_system(models.odd_set_hrep(n), comment)
    elif name == "parity-ef":
        ef = models.parity_ef(_need_n(args))
        text = fileio.format_system(ef.system, comment + "; projection coords " + ",".join(map(str, ef.proj_coords)))
        report.payload.update(inequalities=ef.size, proj_coords=ef.proj_coords)
    elif name == "parity-chain":
        res = models.parity_chain(_need_n(args), verify=False)
        text = fileio.format_system(res.polytope.system, comment + "; projection coords " + ",".join(map(str, res.outputs)))
        report.payload.update(inequalities=len(res.polytope.system.inequalities), proj_coords=res.outputs)
    else:
        builders = {
            "pstar": lambda: models.pstar(),
            "simplex-t": lambda: models.simplex_t(),
            "hypercube": lambda: models.hypercube(_need_n(args)),
            "simplex": lambda: models.standard_simplex(_need_n(args)),
            "pyramid": lambda: models.square_pyramid(),
            "prism": lambda: models.prism(),
            "stab": lambda: models.stable_set_polytope(_need_graph(args)),
            "tsp": lambda: models.tsp_polytope(_need_graph(args)),
        }
        if name not in builders:
            raise ValueError(f"unknown model {name!r}")
        p = builders[name]()
        text = fileio.polytope_text(p, args.rep, comment)
    if args.output:
        fileio.write_text(args.output, text)
        report.payload["output"] = args.output
    else:
        sys.stdout.write(text)
        report.payload["quiet"] = True


MODELS = ("parity", "odd-set", "parity-ef", "parity-chain", "pstar", "simplex-t", "hypercube", "simplex", "pyramid", "prism", "stab", "tsp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfkit", description="Exact polyhedral toolkit for projected faces.")
    parser.add_argument("--cap-rays", type=int, help="limit on intermediate rays in double description")
    parser.add_argument("--cap-vertices", type=int, help="limit on polytope vertex counts")
    parser.add_argument("--json", action="store_true", help="print the report as one JSON object")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert between H- and V-representation")
    p.add_argument("--input", required=True)
    p.add_argument("--to", choices=("hrep", "vrep"), required=True)
    p.add_argument("--output")
    p.set_defaults(run=cmd_convert)

    p = sub.add_parser("check-pf", help="decide the projected-faces property")
    p.add_argument("--input", required=True)
    p.add_argument("--coords", required=True, help="0-based, comma-separated")
    p.add_argument("--certificate", help="write a Radon certificate here when the property fails")
    p.set_defaults(run=cmd_check_pf)

    p = sub.add_parser("generators", help="affine maps generating the fibers")
    p.add_argument("--input", required=True)
    p.add_argument("--coords", required=True, help="0-based, comma-separated")
    p.add_argument("--output")
    p.set_defaults(run=cmd_generators)

    p = sub.add_parser("compose", help="glue two polytopes along an f-table")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--output", help="write the glued system here")
    p.add_argument("--verify", action="store_true", help="check hypotheses and conclusions")
    p.add_argument("--prune", action="store_true", help="drop gluing rows implied by the factors")
    p.set_defaults(run=cmd_compose)

    p = sub.add_parser("model", help="emit a built-in polytope")
    p.add_argument("name", nargs="?", choices=MODELS)
    p.add_argument("--name", dest="name_opt", choices=MODELS)
    p.add_argument("--n", type=int)
    p.add_argument("--graph", help="graph file: 'vertices k' then one 'u v' edge per line")
    p.add_argument("--rep", choices=("hrep", "vrep"), default="hrep")
    p.add_argument("--output")
    p.set_defaults(run=cmd_model)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = RunReport(args.command)
    if args.command == "model":
        args.model_name = args.name_opt or args.name
        if args.model_name is None:
            parser.error("model needs a name")
    caps = {}
    if args.cap_rays is not None:
        caps["rays"] = args.cap_rays
    if args.cap_vertices is not None:
        caps["vertices"] = args.cap_vertices
    start = time.perf_counter()
    try:
        with caps_override(**caps):
            args.run(args, report)
    except (ValueError, OSError) as exc:
        report.status = "error"
        report.payload["error"] = str(exc)
    report.wall_time_ms = int((time.perf_counter() - start) * 1000)
    quiet = report.payload.pop("quiet", False)
    # converted text owns stdout when no output file was given
    out = sys.stderr if quiet else sys.stdout
    print(report.render(args.json), file=out)
    return EXIT[report.status]


if __name__ == "__main__":
    sys.exit(main())
