import json
import subprocess
import sys

import numpy as np
import pytest

from tmodarcs.arc import Arc
from tmodarcs.cli import main
from tmodarcs.constructions import baer_subgeometry
from tmodarcs.formats import dumps_arc, dumps_matrix, dumps_points, loads_arc, read_arc
from tmodarcs.gf import GF
from tmodarcs.pg import build_space


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def construct(tmp_path, capsys, name, *args):
    path = tmp_path / f"{name}.arc"
    code, _, err = run(capsys, "construct", *args, "--out", path)
    assert code == 0, err
    return path


NAMED_CONSTRUCTIONS = [
    ("ell", ["quadric", "--q", 5, "--r", 3, "--kind", "elliptic"], 143, 3),
    ("hyp", ["quadric", "--q", 5, "--r", 3, "--kind", "hyperbolic", "--variant", 2], 168, 3),
    ("par", ["quadric", "--q", 3, "--r", 2, "--kind", "parabolic"], 11, 2),
    ("ell7", ["quadric", "--q", 7, "--r", 3, "--kind", "elliptic"], None, 4),
    ("herm9", ["hermitian", "--q", 9], 84, 3),
    ("herm4", ["hermitian", "--q", 4], 18, 2),
    ("p18", ["plane18", "--q", 5], 18, 3),
    ("p23", ["plane23"], 23, 3),
    ("p28", ["plane28", "--q", 5], 28, 3),
    ("p33", ["plane33", "--q", 5], 33, 3),
]


@pytest.mark.parametrize("name,args,size,t", NAMED_CONSTRUCTIONS)
def test_construct_verify_round_trip(tmp_path, capsys, name, args, size, t):
    path = construct(tmp_path, capsys, name, *args)
    extra = ["--expect-size", size] if size else []
    code, out, _ = run(capsys, "verify", path, "--expect-t", t, "--expect-strong", *extra)
    assert code == 0
    cert = json.loads(out)
    assert cert["ok"] and cert["t"] == t
    saved = json.loads((tmp_path / f"{name}.arc.cert.json").read_text())
    assert saved["input_digest"] == cert["input_digest"]


def test_quadric_arcs_not_lifted(tmp_path, capsys):
    for kind in ("elliptic", "hyperbolic"):
        path = construct(tmp_path, capsys, kind, "quadric", "--q", 5, "--r", 3, "--kind", kind)
        code, out, _ = run(capsys, "verify", path, "--expect-t", 3, "--expect-strong", "--expect-not-lifted")
        assert code == 0 and json.loads(out)["lifting_points"] == []


def test_global_flags_before_command(tmp_path, capsys):
    path = tmp_path / "g.arc"
    code, _, _ = run(capsys, "--q", 5, "--r", 3, "construct", "quadric", "--kind", "elliptic", "--out", path)
    assert code == 0 and read_arc(path).cardinality == 143
    code, _, _ = run(capsys, "--p", 3, "--e", 2, "construct", "hermitian", "--out", path)
    assert code == 0 and read_arc(path).cardinality == 84


def test_lift_sum_scale(tmp_path, capsys):
    base = construct(tmp_path, capsys, "p23", "plane23")
    lifted = construct(tmp_path, capsys, "lift", "lift", "--arc", base, "--q", 5, "--r", 3)
    code, out, _ = run(capsys, "verify", lifted, "--expect-size", 118, "--expect-lifted")
    assert code == 0
    assert json.loads(out)["lifting_points"] == [build_space(GF(5), 3).pid([0, 0, 0, 1])]
    code, _, _ = run(capsys, "verify", lifted, "--expect-not-lifted")
    assert code == 1
    custom = construct(tmp_path, capsys, "lift2", "lift", "--arc", base, "--q", 5, "--r", 3, "--sigma", "1 0 0 1; 0 1 0 0; 0 0 1 0", "--gamma", "0 1 1 1")
    assert read_arc(custom).cardinality == 118
    p18 = construct(tmp_path, capsys, "p18", "plane18")
    total = construct(tmp_path, capsys, "sum", "sum", "--arc", base, "--arc", p18)
    code, out, _ = run(capsys, "verify", total, "--expect-t", 1, "--expect-size", 41)
    assert code == 0
    scaled = construct(tmp_path, capsys, "scale", "scale", "--arc", base, "--alpha", 2)
    assert read_arc(scaled).cardinality == 46
    code, _, err = run(capsys, "construct", "scale", "--arc", base, "--alpha", 7)
    assert code == 2 and "scalar" in err


def test_mnset(tmp_path, capsys):
    space = build_space(GF(9), 2)
    setfile = tmp_path / "baer.pts"
    setfile.write_text(dumps_points(space, baer_subgeometry(space)))
    path = construct(tmp_path, capsys, "baer", "mnset", "--q", 9, "--set", setfile, "--m", 1)
    arc = read_arc(path)
    assert arc.cardinality == 39 and set(arc.line_values.tolist()) == {3, 12}
    setfile.write_text(dumps_points(space, [0, 1, 2]))
    code, _, err = run(capsys, "construct", "mnset", "--q", 9, "--set", setfile, "--m", 1)
    assert code == 2 and "line" in err


def test_arc128_commands(tmp_path, capsys):
    path = construct(tmp_path, capsys, "a128", "arc128", "--seed", 0)
    code, out, _ = run(capsys, "verify", path, "--expect-t", 3, "--expect-strong", "--expect-not-lifted", "--expect-size", 128)
    assert code == 0
    code, out, _ = run(capsys, "spectrum", path)
    assert "18: 20" in out and "33: 40" in out and "t: 3" in out
    arc = read_arc(path)
    zero = int(np.flatnonzero(arc.mult == 0)[0])
    code, out, _ = run(capsys, "project", path, "--center", zero)
    assert code == 0
    assert "[line_types]\nalpha: 3\nbeta: 4\ngamma1: 6\ngamma2: 12\ngamma3: 6\n" in out
    assert "ok: yes" in out
    coords = " ".join(str(int(x)) for x in arc.space.coords[zero])
    code, out2, _ = run(capsys, "project", path, "--center", coords)
    assert code == 0 and out2 == out
    one = int(np.flatnonzero(arc.mult == 1)[0])
    code, _, err = run(capsys, "project", path, "--center", one)
    assert code == 2 and "multiplicity" in err
    code, out, _ = run(capsys, "cap-extract", path, "--m", 2)
    assert code == 0 and "size: 20" in out and "6=40 4=80 3=20 0=16" in out
    code, out, _ = run(capsys, "cap-extract", path, "--m", 1)
    assert code == 1 and "cap: no" in out
    code, out, _ = run(capsys, "lifting-points", path)
    assert code == 0 and "count: 0" in out


def test_certificates_reproducible(tmp_path, capsys):
    a = construct(tmp_path, capsys, "one", "arc128", "--seed", 0)
    b = construct(tmp_path, capsys, "two", "arc128", "--seed", 0)
    assert a.read_bytes() == b.read_bytes()
    ca = (tmp_path / "one.arc.cert.json").read_bytes()
    cb = (tmp_path / "two.arc.cert.json").read_bytes()
    assert ca == cb
    _, out1, _ = run(capsys, "verify", a)
    _, out2, _ = run(capsys, "verify", b)
    assert out1 == out2


def test_project_zero_arc(tmp_path, capsys):
    path = tmp_path / "zero.arc"
    path.write_text("q 5 p 5 e 1 r 3\n")
    code, out, _ = run(capsys, "project", path, "--center", 0)
    assert code == 0 and "induced_size: 0" in out


def test_solve_weights(tmp_path, capsys):
    code, out, _ = run(capsys, "solve-weights", "--t", 3, "--max-w", 3)
    assert code == 0 and out == "1 0 2 3\n3 3 3 3\n"
    code, out, _ = run(capsys, "solve-weights", "--t", 4)
    rows = set(out.splitlines())
    assert {"0 3 2 4", "1 2 0 4", "2 1 3 4", "3 0 1 4"} <= rows
    code, out, _ = run(capsys, "solve-weights", "--t", 0, "--max-w", 0)
    assert out == "0 0 0 0\n"
    mfile = tmp_path / "m.txt"
    mfile.write_text(dumps_matrix([[1, 0], [0, 1]]))
    code, out, _ = run(capsys, "--q", 3, "solve-weights", mfile, "--t", 1)
    assert code == 0 and out == "1 1\n"
    mfile.write_text("1 2\n3\n")
    code, _, _ = run(capsys, "solve-weights", mfile, "--t", 1)
    assert code == 2


def test_search_cap(tmp_path, capsys):
    code, _, err = run(capsys, "search-cap", "--budget", 1)
    assert code == 3 and "no suitable" in err
    out = tmp_path / "cap.pts"
    code, _, _ = run(capsys, "search-cap", "--seed", 1, "--out", out)
    assert code == 0
    assert len([l for l in out.read_text().splitlines() if not l.startswith("#")]) == 20


def test_dual(tmp_path, capsys, pg25):
    line = Arc.from_points(pg25, pg25.hyperplane_points[0])
    path = tmp_path / "line.arc"
    path.write_text(dumps_arc(line))
    code, out, _ = run(capsys, "dual", path, "--t", 0)
    assert code == 0 and loads_arc(out).cardinality == 0
    code, _, _ = run(capsys, "dual", path, "--t", 2)
    assert code == 1


def test_error_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.arc"
    bad.write_text("q 5 p 5 e 1 r 3\n0 0 0 9 : 1\n")
    assert run(capsys, "verify", bad)[0] == 2
    assert run(capsys, "verify", tmp_path / "missing.arc")[0] == 2
    single = tmp_path / "single.arc"
    single.write_text("q 5 p 5 e 1 r 2\n1 0 0 : 1\n")
    code, out, _ = run(capsys, "verify", single)
    assert code == 1 and json.loads(out)["t"] is None
    ell = construct(tmp_path, capsys, "e", "quadric", "--q", 5, "--r", 3, "--kind", "elliptic")
    assert run(capsys, "verify", ell, "--expect-t", 2)[0] == 1
    assert run(capsys, "construct", "quadric", "--q", 5, "--r", 3)[0] == 2
    assert run(capsys, "construct", "quadric", "--q", 5, "--r", 2, "--kind", "elliptic")[0] == 2
    assert run(capsys, "construct", "plane23", "--q", 7)[0] == 2
    assert run(capsys, "construct", "hermitian", "--q", 5)[0] == 2
    assert run(capsys, "construct", "nonsense")[0] == 2
    assert run(capsys, "--q", 6, "--r", 2, "construct", "plane18")[0] == 2
    assert run(capsys, "lifting-points", single)[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tmodarcs", "solve-weights", "--t", "3", "--max-w", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "1 0 2 3\n3 3 3 3\n"
