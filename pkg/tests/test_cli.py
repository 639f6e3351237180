import os
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import FIXTURES
from tempered.cli import main, run
from tempered.growth_series import parse_series
from tempered.tube_engine import parse_vector

BAD = os.path.join(FIXTURES, "bad")


def fx(name):
    return os.path.join(FIXTURES, name)


def out_of(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_norm_example(capsys):
    code, out, _ = out_of(["norm", "--weight", "1", "--input", fx("log.series")], capsys)
    assert code == 0 and out == "8/9\n"


def test_derham_example(capsys):
    code, out, _ = out_of(["derham", "--algebra", "tempered-disk", "--trunc", "16",
                           "--format", "csv"], capsys)
    assert code == 0 and out == "0,1\n1,0\n"


def test_cech_example(capsys):
    code, out, _ = out_of(["cech", "--cover", fx("p1.cover"), "--trunc", "8",
                           "--format", "csv"], capsys)
    assert code == 0 and out == "0,1\n1,0\n2,1\n"


def test_sweep_prepends_truncation():
    text, _ = run(["derham", "--trunc-sweep", "16,8", "--format", "csv"])
    assert text == "8,0,1\n8,1,0\n16,0,1\n16,1,0\n"
    text, _ = run(["derham", "--trunc-sweep", "8", "--format", "text"])
    assert text.startswith("N = 8\n")


def test_other_examples():
    assert run(["membership", "--input", fx("log64.series")])[0].splitlines()[:3] == \
        ["class: tempered", "verdict: member-up-to-truncation", "witness: 1"]
    assert "verdict: rejected" in run(["membership", "--class", "bounded",
                                       "--input", fx("log64.series")])[0]
    assert run(["growth", "--input", fx("exp32.series")])[0] == "order: exceeds n_max\n"
    pair = run(["pair", "--input", fx("ones5.series"), "--input", fx("powers5.series")])[0]
    assert pair.splitlines()[0] == "value: 19531"
    transfer = run(["transfer", "--input", fx("exp.system")])[0]
    assert "verdict: hypothesis of transfer theorem not met" in transfer
    logtype = run(["transfer", "--input", fx("logtype.system")])[0]
    assert "verdict: transfer consistent" in logtype
    fib = run(["weak-fibration", "--input", fx("twopoint.pres"), "--dim", "1"])[0]
    assert fib.splitlines() == ["base: (2,0)", "fibred (d=1): (2,0,0)", "verdict: consistent"]
    assert run(["lattice", "--query", "open-disk", "tempered"])[0] == \
        "open-disk <= tempered: yes\n"
    assert run(["derham", "--input", fx("twopoint.pres"), "--format", "csv"])[0] == "0,2\n1,0\n"


def test_ode_solve_csv():
    text, _ = run(["ode-solve", "--input", fx("geometric.system"), "--trunc", "5",
                   "--format", "csv"])
    assert text == "".join(f"{m},1,1,1\n" for m in range(6))
    exp = run(["ode-solve", "--input", fx("exp.system"), "--trunc", "4"])[0]
    assert exp.splitlines()[-1] == "G[4](0) 1 1 : 1/24"


def test_split_cover_output():
    text, _ = run(["split-cover", "--input", fx("laurent.series")])
    assert "-2 : 1" in text and "0 : 3" in text


# -- round-trips ---------------------------------------------------------------------

def test_series_outputs_reparse():
    for argv in (["tau", "--trunc", "3", "--input", fx("log.series")],
                 ["divide-diagonal", "--input", fx("cubes.series")],
                 ["divide-linear", "--g", "1", "--g-prime", "1", "--input", fx("cubic.series")],
                 ["normal-form", "--input", fx("nf.pres"), "--input", fx("nf.series")],
                 ["change-presentation", "--weight", "1", "--input", fx("shift.rel"),
                  "--input", fx("family.series")]):
        text, _ = run(argv)
        f = parse_series(text)
        assert parse_series(text.replace(" : ", ":")) == f
        assert "# certificate: fails" not in text


def test_divide_outputs():
    quotient = parse_series(run(["divide-diagonal", "--input", fx("cubes.series")])[0])
    assert dict(quotient.items()) == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    h = parse_series(run(["divide-linear", "--g", "1", "--g-prime", "1",
                          "--input", fx("cubic.series")])[0])
    assert dict(h.items()) == {(0,): 1, (1,): 1, (2,): 1}


def test_koszul_outputs():
    text, _ = run(["koszul-reduce", "--input", fx("coords.pres"), "--input", fx("phi.vec")])
    assert parse_vector(text).is_zero()
    assert "# residual: zero" in text
    scaled, _ = run(["koszul-reduce", "--input", fx("coords.pres"), "--input", fx("scaled.vec")])
    assert "# scale: 5" in scaled and "# residual: zero" in scaled


def test_output_file(tmp_path):
    target = tmp_path / "norm.txt"
    assert main(["norm", "--input", fx("log.series"), "--output", str(target)]) == 0
    assert target.read_text() == "8\n"


def test_fixture_corpus_is_current(tmp_path):
    import make_fixtures
    for name, text in make_fixtures.files():
        with open(fx(name), encoding="utf-8") as fh:
            assert fh.read() == text, name


# -- exit codes ----------------------------------------------------------------------

BAD_CASES = {
    ".series": lambda p: ["norm", "--input", p],
    ".system": lambda p: ["ode-solve", "--input", p],
    ".pres": lambda p: ["weak-fibration", "--input", p],
    ".vec": lambda p: ["koszul-reduce", "--input", fx("coords.pres"), "--input", p],
    ".rel": lambda p: ["change-presentation", "--input", p, "--input", fx("family.series")],
    ".cover": lambda p: ["cech", "--cover", p],
}


@pytest.mark.parametrize("name", sorted(os.listdir(BAD)))
def test_bad_fixtures_exit_2(name, capsys):
    argv = BAD_CASES[os.path.splitext(name)[1]](os.path.join(BAD, name))
    code, out, err = out_of(argv, capsys)
    assert code == 2 and out == "" and err.startswith("error:")


DOMAIN_ERRORS = [
    ["koszul-reduce", "--input", fx("constant.pres"), "--input", fx("constant.vec")],
    ["derham", "--input", fx("double.pres")],
    ["cech", "--cover", fx("squared.cover"), "--trunc", "8"],
    ["tau", "--trunc", "9", "--input", fx("log.series")],
    ["divide-linear", "--g", "1", "--g-prime", "1", "--input", fx("log.series")],
    ["divide-linear", "--g", "2", "--g-prime", "1", "--input", fx("log.series")],
    ["ode-solve", "--trunc", "40", "--input", fx("geometric.system")],
    ["membership", "--class", "tempered", "--input", fx("laurent.series")],
    ["norm", "--trunc", "20", "--input", fx("log.series")],
]


@pytest.mark.parametrize("argv", DOMAIN_ERRORS, ids=lambda a: a[0])
def test_domain_errors_exit_1(argv, capsys):
    code, out, err = out_of(argv, capsys)
    assert code == 1 and err.startswith("error:")


USAGE_ERRORS = [
    ["frobnicate"],
    [],
    ["norm", "--bogus"],
    ["norm", "--input", fx("missing.series")],
    ["norm"],
    ["norm", "--prime", "4", "--input", fx("log.series")],
    ["norm", "--prime", "3", "--input", fx("log.series")],
    ["norm", "--trunc", "0", "--input", fx("log.series")],
    ["derham", "--trunc-sweep", "8,x"],
    ["derham"],
    ["tau", "--input", fx("log.series")],
    ["cech", "--cover", fx("p1.cover")],
    ["membership", "--class", "nonsense", "--input", fx("log.series")],
    ["lattice", "--query", "tempered", "nonsense"],
]


@pytest.mark.parametrize("argv", USAGE_ERRORS, ids=lambda a: " ".join(a[:2]) or "empty")
def test_usage_errors_exit_2(argv, capsys):
    code, _, _ = out_of(argv, capsys)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tempered", "norm", "--input",
                           fx("log.series"), "--weight", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "8/9\n"
    proc = subprocess.run([sys.executable, "-m", "tempered", "nope"], capture_output=True)
    assert proc.returncode == 2
