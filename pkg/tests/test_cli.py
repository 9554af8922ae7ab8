import json
import subprocess
import sys

import pytest

from pfkit.cli import main
from pfkit.compose import Split
from pfkit.fileio import format_ftable, format_vrep, parse_generators, parse_polytope_text, polytope_text
from pfkit.models import hypercube, path_graph, pstar, simplex_t, stable_set_cutset_input
from pfkit.pfp import affine_generators
from pfkit.polytope import from_points


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write


def test_convert_vertices_to_inequalities(capsys, files, tmp_path):
    src = files("t.txt", format_vrep(simplex_t().vrep))
    out = tmp_path / "t.h"
    code, stdout, _ = run(capsys, "convert", "--input", src, "--to", "hrep", "--output", out)
    assert code == 0
    rep = report(stdout)
    assert (rep["status"], rep["facets"], rep["vertices"]) == ("ok", "4", "4")
    assert len(parse_polytope_text(out.read_text()).inequalities) == 4


def test_convert_cube_to_points_on_stdout(capsys, files):
    src = files("c.txt", polytope_text(hypercube(2)))
    code, stdout, stderr = run(capsys, "convert", "--input", src, "--to", "vrep")
    assert code == 0
    assert len(parse_polytope_text(stdout).points) == 4
    assert "status=ok" in stderr


def test_convert_even_points(capsys, files):
    src = files("e.txt", "\n".join(["# model parity", *run(capsys, "model", "parity", "--n", 4, "--rep", "vrep")[1].splitlines()[1:]]))
    code, stdout, _ = run(capsys, "convert", "--input", src, "--to", "hrep")
    assert code == 0
    assert len(parse_polytope_text(stdout).inequalities) == 16


def test_convert_bad_file(capsys, files):
    src = files("bad.txt", "V-representation\nambient 1\nbegin\n")
    code, stdout, _ = run(capsys, "convert", "--input", src, "--to", "hrep")
    assert code == 2
    assert "status=error" in stdout


def model_file(capsys, files, name, *extra):
    code, text, _ = run(capsys, "model", name, *extra)
    assert code == 0
    return files(f"{name}.txt", text)


def test_check_pf_holds(capsys, files):
    src = model_file(capsys, files, "pstar")
    code, stdout, _ = run(capsys, "check-pf", "--input", src, "--coords", "0")
    assert code == 0
    assert report(stdout)["holds"] == "true"


def test_check_pf_fails_with_certificate(capsys, files, tmp_path):
    src = model_file(capsys, files, "pyramid")
    cert = tmp_path / "cert.txt"
    code, stdout, _ = run(capsys, "check-pf", "--input", src, "--coords", "0,1", "--certificate", cert)
    assert code == 1
    rep = report(stdout)
    assert (rep["status"], rep["holds"], rep["u"]) == ("fail", "false", "(0 0)")
    assert "u 0 0" in cert.read_text().splitlines()


def test_check_pf_bad_coordinate(capsys, files):
    src = model_file(capsys, files, "pstar")
    code, stdout, _ = run(capsys, "check-pf", "--input", src, "--coords", "7")
    assert code == 2
    assert "coordinate out of range" in report(stdout)["error"]


def test_generators_for_the_relation(capsys, files, tmp_path):
    src = model_file(capsys, files, "pstar")
    out = tmp_path / "g.txt"
    code, stdout, _ = run(capsys, "generators", "--input", src, "--coords", "0", "--output", out)
    assert code == 0
    assert report(stdout)["maps"] == "4"
    gens = parse_generators(out.read_text(), 1, 2)
    assert gens.maps == affine_generators(pstar(), [0]).maps


def test_generators_for_simplex_t(capsys, files):
    src = model_file(capsys, files, "simplex-t")
    code, stdout, stderr = run(capsys, "generators", "--input", src, "--coords", "0")
    assert code == 0
    assert len(parse_generators(stdout, 1, 2)) == 4
    assert "maps=4" in stderr


def test_generators_report_the_failure(capsys, files):
    src = model_file(capsys, files, "pyramid")
    code, stdout, _ = run(capsys, "generators", "--input", src, "--coords", "0,1")
    assert code == 2
    rep = report(stdout)
    assert rep["holds"] == "false"
    assert "PF property fails" in rep["error"]


def parity_step_files(files):
    p1 = files("p1.txt", format_vrep(from_points([(0, 0), (1, 1)]).vrep))
    p2 = files("p2.txt", format_vrep(simplex_t().vrep))
    table = {((0,), (0,)): (0,), ((1,), (1,)): (1,)}
    f = files("f.txt", format_ftable(Split(1, 1, 1, 2, 1).as_dict(), table))
    return p1, p2, f


def test_compose_parity_step(capsys, files, tmp_path):
    p1, p2, f = parity_step_files(files)
    out = tmp_path / "q.txt"
    code, stdout, _ = run(capsys, "compose", "--p1", p1, "--p2", p2, "--f", f, "--output", out, "--verify")
    assert code == 0
    rep = report(stdout)
    assert rep["hypotheses_met"] == rep["conclusion_a"] == rep["conclusion_b"] == "true"
    assert rep["target_coords"] == "0,2,4,5"
    assert parse_polytope_text(out.read_text()).ambient_dim == 6


def test_compose_without_verify_only_builds(capsys, files):
    p1, p2, f = parity_step_files(files)
    code, stdout, _ = run(capsys, "compose", "--p1", p1, "--p2", p2, "--f", f)
    assert code == 0
    assert "conclusion_a" not in stdout


def test_compose_non_clique_cutset(capsys, files):
    glued = stable_set_cutset_input(path_graph(3), [0, 2], [1])
    inp = glued.input
    p1 = files("a.txt", format_vrep(inp.p1.vrep))
    p2 = files("b.txt", format_vrep(inp.p2.vrep))
    f = files("f.txt", format_ftable(inp.split.as_dict(), inp.f))
    code, stdout, _ = run(capsys, "compose", "--p1", p1, "--p2", p2, "--f", f, "--verify")
    assert code == 1
    rep = report(stdout)
    assert (rep["pf_p1"], rep["hypotheses_met"]) == ("false", "false")


def test_compose_malformed_table(capsys, files):
    p1, p2, _ = parity_step_files(files)
    f = files("bad.txt", "0 | 0 -> 0\n")
    code, stdout, _ = run(capsys, "compose", "--p1", p1, "--p2", p2, "--f", f)
    assert code == 2
    assert "split header" in stdout


def test_model_parity(capsys):
    code, text, _ = run(capsys, "model", "parity", "--n", 4)
    assert code == 0
    assert len(parse_polytope_text(text).inequalities) == 16


def test_model_parity_extension(capsys):
    code, text, err = run(capsys, "model", "--name", "parity-ef", "--n", 5)
    assert code == 0
    assert len(parse_polytope_text(text).inequalities) == 16
    assert "inequalities=16" in err
    assert "projection coords" in text.splitlines()[0]


def test_model_errors(capsys, files):
    assert run(capsys, "model", "parity")[0] == 2
    assert run(capsys, "model", "stab")[0] == 2
    g = files("g.txt", "vertices 3\n0 1\n1 2\n")
    code, text, _ = run(capsys, "model", "stab", "--graph", g, "--rep", "vrep")
    assert code == 0
    assert len(parse_polytope_text(text).points) == 5


def test_cap_flag_turns_into_an_error(capsys):
    code, stdout, _ = run(capsys, "--cap-vertices", 3, "model", "hypercube", "--n", 2)
    assert code == 2
    assert "status=error" in stdout


def test_json_report(capsys, files):
    src = model_file(capsys, files, "pstar")
    code, stdout, _ = run(capsys, "--json", "check-pf", "--input", src, "--coords", "0")
    doc = json.loads(stdout)
    assert code == 0
    assert (doc["command"], doc["status"], doc["holds"]) == ("check-pf", "ok", True)
    assert isinstance(doc["wall_time_ms"], int)


def strip_time(text):
    return "\n".join(l for l in text.splitlines() if not l.startswith("wall_time_ms="))


def test_outputs_are_byte_identical(capsys, files, tmp_path):
    p1, p2, f = parity_step_files(files)
    runs = []
    for k in range(2):
        out = tmp_path / f"q{k}.txt"
        _, stdout, _ = run(capsys, "compose", "--p1", p1, "--p2", p2, "--f", f, "--output", out, "--verify")
        runs.append((out.read_bytes(), strip_time(stdout).replace(str(out), "OUT")))
    assert runs[0] == runs[1]
    a = run(capsys, "model", "parity-chain", "--n", 4)[1]
    b = run(capsys, "model", "parity-chain", "--n", 4)[1]
    assert a == b


def test_console_entry_point(tmp_path):
    src = tmp_path / "p.txt"
    src.write_text(polytope_text(simplex_t()))
    proc = subprocess.run(
        [sys.executable, "-m", "pfkit", "check-pf", "--input", str(src), "--coords", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "holds=true" in proc.stdout
