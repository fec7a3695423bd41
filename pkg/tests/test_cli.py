import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from tropdisc import catalog
from tropdisc.cli import main
from tropdisc.fan import membership, tropical_discriminant
from tropdisc.initial import sample_weight

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = main([str(a) for a in argv], out=out, err=err)
    return status, out.getvalue(), err.getvalue()


def run_json(*argv):
    status, out, _ = run(*argv, "--format", "json")
    return status, json.loads(out)


def test_initial_mixed_discriminant_monomial():
    status, out, err = run(
        "initial", "--matrix", DATA / "mixeddisc.txt", "--w", "446,773,680,37,925,963,765,380"
    )
    assert status == 0
    assert out.strip() == "x1^28 x4^35 x5^35 x8^28"
    assert "Time elapsed" in err and "Time elapsed" not in out


def test_degree_of_veronese():
    status, out, _ = run("degree", "--matrix", DATA / "veronese.txt")
    assert status == 0 and out.strip() == "3"


def test_validate_pyramid():
    status, body = run_json("validate", "--matrix", DATA / "pyramid.txt")
    assert status == 2 and body["error"] == "pyramid"
    status, out, _ = run("validate", "--matrix", DATA / "pyramid.txt")
    assert status == 2 and out.strip() == "error: pyramid"


def test_validate_ok_and_gale():
    status, body = run_json("validate", "--matrix", DATA / "veronese.txt")
    assert status == 0 and body["valid"] and (body["d"], body["n"]) == (3, 6)
    status, body = run_json("gale", "--matrix", DATA / "veronese.txt")
    assert status == 0 and len(body["gale"]) == 6 and len(body["gale"][0]) == 3


def test_chains_dimension_and_fan():
    status, body = run_json("chains", "--matrix", DATA / "k4.txt")
    assert status == 0 and body["chain_length"] == 2
    assert all(len(ch) == 2 for ch in body["chains"])
    status, body = run_json("dimension", "--cayley", DATA / "three_quadrics.json")
    assert status == 0 and body["codim"] == 2 and body["defective"]
    status, body = run_json("fan", "--matrix", DATA / "mixeddisc.txt")
    assert status == 0
    assert (body["co_bergman_cones"], body["codim_one_cones"]) == (57, 48)


def test_fan_round_trip(tmp_path):
    status, out, _ = run("fan", "--matrix", DATA / "veronese.txt", "--format", "json")
    assert status == 0
    path = tmp_path / "fan.json"
    path.write_text(out)
    fan = tropical_discriminant(catalog.VERONESE)
    rng = np.random.default_rng(2)
    inside = [sum(r) for r in zip(*fan.cones[0].rays)]
    for w in [inside] + [sample_weight(rng, 6) for _ in range(5)]:
        csv = ",".join(map(str, w))
        via_file = run_json("membership", "--fan", path, "--w", csv)[1]["member"]
        direct = run_json("membership", "--matrix", DATA / "veronese.txt", "--w", csv)[1]["member"]
        assert via_file == direct == membership(fan, w)


def test_initial_samples_and_defective_cycles():
    status, body = run_json("initial", "--matrix", DATA / "veronese.txt", "--samples", "5", "--seed", "1")
    assert status == 0 and len(body["cycles"]) == 5
    assert all(sum(c["exp"]) == 3 for c in body["cycles"])
    w = "146311,109734,43910,203241,407629,283806,176966,314134,714458"
    status, out, _ = run("initial", "--cayley", DATA / "three_quadrics.json", "--w", w)
    assert status == 0 and out.strip() == "<x3,x6>^2 <x3,x7>^2 <x4,x7>^2"


def test_newton_and_recover():
    status, body = run_json("newton", "--matrix", DATA / "veronese.txt")
    assert status == 0 and body["degree"] == 3
    assert len(body["monomials"]) == 5 and body["fvector"] == [5, 9, 6]
    status, body = run_json("recover", "--matrix", DATA / "k4.txt")
    assert status == 0
    coeffs = sorted(((c["exp"], c["coeff"]) for c in body["coefficients"]), reverse=True)
    assert [c for _, c in coeffs] in (["1", "-1", "1", "-1"], ["-1", "1", "-1", "1"])


def test_cayley_subcommands():
    status, out, _ = run("cayley-degree", "--cayley", DATA / "four_triangles.json")
    assert status == 0 and out.strip() == "12"
    status, body = run_json("cayley-degree", "--cayley", DATA / "nonessential.json")
    assert status == 2 and body["error"] == "not-essential"
    status, body = run_json(
        "mixed", "--cayley", DATA / "three_quadrics.json", "--w", "670,927,1184,525,1140,1755,647,1411,2175"
    )
    assert status == 0
    assert body["total_normalized_volume"] == body["minkowski_normalized_volume"] == 6
    mixed = [c for c in body["cells"] if c["mixed"]]
    assert len(mixed) == 3 and all(c["volume"] == "2" for c in mixed)
    status, body = run_json("membership", "--cayley", DATA / "k4_blocks.json", "--w", "1,1,1,1,1,1")
    assert status == 0 and body["member"] and body["member_via_mixed"]


def test_classes():
    status, body = run_json("classes", "--matrix", DATA / "k4.txt", "--samples", "500")
    assert status == 0 and body["observed_classes"] == 4


def test_error_exit_codes(tmp_path):
    assert run("initial", "--matrix", DATA / "veronese.txt", "--w", "0,0,0,0,0,0")[0] == 3
    assert run("initial", "--matrix", DATA / "veronese.txt", "--w", "1,2,3")[0] == 2
    assert run("initial", "--matrix", DATA / "veronese.txt")[0] == 2
    assert run("initial", "--matrix", DATA / "veronese.txt", "--w", "1,2,3,4,5,6", "--samples", "3")[0] == 2
    assert run("newton", "--cayley", DATA / "three_quadrics.json")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("2 3\n1 1\n")
    status, body = run_json("degree", "--matrix", bad)
    assert status == 2 and body["error"] == "shape"
    assert run("degree", "--matrix", tmp_path / "missing.txt")[0] == 2
    status, body = run_json("membership", "--fan", bad, "--w", "1,2")
    assert status == 2 and body["error"] == "parse"


@pytest.mark.parametrize(
    "argv",
    [
        ("newton", "--matrix", DATA / "k4.txt", "--seed", "9"),
        ("classes", "--matrix", DATA / "veronese.txt", "--samples", "300"),
        ("fan", "--matrix", DATA / "veronese.txt"),
    ],
)
def test_json_is_byte_identical(argv):
    first = run(*argv, "--format", "json")[1]
    second = run(*argv, "--format", "json")[1]
    assert first == second


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tropdisc", "degree", "--matrix", str(DATA / "k4.txt")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "4"
