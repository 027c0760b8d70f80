import io
import json
import math

import numpy as np
import pytest

from tomokit.cli import parse_cv_state, parse_spin_state, run
from tomokit.cvtomo import OpticalTomogram


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def fields(line):
    return dict(tok.split("=", 1) for tok in line.split())


@pytest.mark.parametrize(
    "spec",
    ["fock:n=2", "coherent:re=1,im=-0.5", "thermal:nbar=0.5", "cgauss:sq=1,sp=2,c=0.3", "product:[fock:n=0;coherent:re=1]"],
)
def test_parse_cv_state_accepts(spec):
    assert parse_cv_state(spec) is not None


@pytest.mark.parametrize("spec", ["fock", "fock:n=-1", "fock:k=1", "squeezed:r=1", "thermal:nbar=-1", "cgauss:sq=1,sp=1,c=2"])
def test_parse_cv_state_rejects(spec):
    with pytest.raises(Exception):
        parse_cv_state(spec)


@pytest.mark.parametrize("spec,dim", [("qubit:0.7,0.3", 2), ("pure:1,0,1", 3), ("bell", 4), ("ghz", 8), ("haar:N=5,seed=1", 5), ("mixhaar:N=3,seed=2", 3)])
def test_parse_spin_state(spec, dim):
    assert parse_spin_state(spec).dim == dim


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nosuch"],
        ["fidelity", "--a", "fock:n=0"],
        ["tomo", "optical", "--state", "fock:n=0", "--thetas", "4"],
        ["tomo", "optical", "--state", "fock:n=0", "--grid", "1,2"],
        ["tomo", "optical", "--state", "bogus:x=1"],
        ["classify", "--in", "/nonexistent/file.csv"],
        ["haar", "avg", "--samples", "10"],
        ["state"],
    ],
)
def test_usage_errors_exit_1(argv):
    assert call(*argv)[0] == 1


def test_fidelity_vacuum_coherent():
    code, out = call("fidelity", "--a", "fock:n=0", "--b", "coherent:re=1,im=0")
    assert code == 0
    assert float(fields(out.strip())["F"]) == pytest.approx(math.exp(-1), abs=1e-4)


def test_classify_fock_one():
    code, out = call("classify", "--state", "fock:n=1")
    assert code == 0
    f = fields(out.strip())
    assert f["classical"] == "false" and f["quantum"] == "true" and f["label"] == "quantum"


def test_classify_json():
    code, out = call("classify", "--state", "thermal:nbar=1", "--json")
    data = json.loads(out)
    assert code == 0 and data["label"] == "both"


def test_optical_csv_roundtrip(tmp_path):
    path = tmp_path / "vac.csv"
    code, out = call("tomo", "optical", "--state", "fock:n=0", "--grid=-8,8,256", "--thetas", "16", "--out", str(path))
    assert code == 0
    stats = fields(out.strip())
    assert stats["nx"] == "256" and stats["ntheta"] == "16"
    assert float(stats["min_row_entropy"]) == pytest.approx(0.5 * math.log(math.pi * math.e), abs=1e-6)
    M = OpticalTomogram.load(str(path))
    assert M.values.shape == (16, 256)
    code, out = call("recon", "--in", str(path))
    assert code == 0 and float(fields(out.strip())["purity"]) == pytest.approx(1.0, abs=1e-3)


def test_state_dispersion_lines():
    code, out = call("state", "--state", "cgauss:sq=0.5,sp=2,c=0.1")
    lines = [fields(ln) for ln in out.strip().splitlines()]
    assert code == 0
    got = {ln["entry"]: float(ln["value"]) for ln in lines if "entry" in ln}
    assert got == pytest.approx({"p1,p1": 2.0, "p1,q1": 0.1, "q1,q1": 0.5})


def test_symplectic_normalized():
    code, out = call("tomo", "symplectic", "--state", "fock:n=1", "--mu", "0.6", "--nu", "0.8")
    last = fields(out.strip().splitlines()[-1])
    assert code == 0 and float(last["normalization"]) == pytest.approx(1.0, abs=1e-6)


def test_center_of_mass_needs_product():
    assert call("tomo", "cm", "--state", "fock:n=0")[0] == 1
    code, out = call("tomo", "cm", "--state", "product:[fock:n=0;fock:n=0]", "--mu", "0.6,1", "--nu", "0.8,0")
    assert code == 0 and float(fields(out.strip().splitlines()[-1])["normalization"]) == pytest.approx(1.0, abs=1e-6)


def test_entropy_tomo_qubit():
    code, out = call("entropy", "tomo", "--state", "qubit:0.5,0.5", "--q", "2")
    assert code == 0
    assert out.count(f"{math.log(2):.10g}") >= 2


def test_ur_ok_for_vacuum():
    assert call("ineq", "ur", "--state", "fock:n=0", "--thetas", "8")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["ineq", "spin-qft", "--dim", "3", "--samples", "50", "--alpha", "0.75", "--beta", "1.5"],
        ["ineq", "subadd", "--samples", "50"],
        ["ineq", "ssa", "--state", "ghz", "--samples", "50", "--seed", "7"],
        ["ineq", "bounds", "--dim", "4", "--samples", "50"],
        ["haar", "avg", "--dim", "2", "--samples", "1000"],
    ],
)
def test_spin_inequalities_hold(argv):
    assert call(*argv)[0] == 0


def test_spin_qft_rejects_bad_orders():
    assert call("ineq", "spin-qft", "--dim", "2", "--alpha", "1", "--beta", "2")[0] == 1


def test_numerical_failure_exit_3(tmp_path):
    from tomokit.cvrecon import gaussian_optical_tomogram

    # a phase-space Gaussian far narrower than the grid resolution cannot be inverted
    path = tmp_path / "narrow.csv"
    gaussian_optical_tomogram(1e-4 * np.eye(2)).save(str(path))
    assert call("recon", "--in", str(path), "--phase-space")[0] == 3


def test_output_is_deterministic():
    argv = ["ineq", "subadd", "--state", "mixhaar:N=6,seed=3", "--dims", "2,3", "--samples", "40", "--seed", "11"]
    assert call(*argv) == call(*argv)


def test_selftest_subset():
    code, out = call("selftest", "--only", "1")
    assert code == 0
    assert out.splitlines()[0].startswith("PASS criterion=1 ")


def test_json_lines_are_valid():
    code, out = call("ineq", "bounds", "--dim", "2", "--samples", "20", "--json")
    data = json.loads(out)
    assert code == 0 and np.isfinite(data["min_deutsch"])
