import random
import subprocess
import sys
from pathlib import Path

import pytest

from sflab.cli.main import main
from sflab.cli.parser import (
    ExprContext,
    format_series,
    parse_expr,
    parse_manifest,
    parse_multivector,
    parse_series,
    parse_slope,
    load_manifest,
)
from sflab.cli.report import emit_report
from sflab.cli.tasks import run_tasks
from sflab.errors import ManifestError, ManifestSyntaxError, ManifestTypeError, SemanticError
from sflab.exactnum import FieldElement, FourierScalar
from sflab.foliation.generate import random_multivector
from sflab.foliation.multivector import MultiVector, format_multivector

MANIFESTS = Path(__file__).resolve().parents[1] / "src" / "sflab" / "manifests"

T3_HEADER = """\
[manifold]
n = 3
radical = 2

[poisson]
Pi = e1^e3 + rt * e2^e3
rank = 2

[splitting]
TF = e1 + rt*e2 ; e3
G0 = e2
"""


# expressions

def test_round_trip_random_expressions():
    rng = random.Random(100)
    for k in range(100):
        n = rng.choice([2, 3, 4])
        deg = rng.randint(0, min(n, 3))
        P = random_multivector(rng, n, deg, nterms=rng.randint(1, 3), maxfreq=rng.randint(1, 2))
        if k % 3 == 0:
            P = P + random_multivector(rng, n, deg) * FieldElement.rt()
        text = format_multivector(P)
        assert parse_multivector(text, ExprContext(n, n), deg) == P, text


def test_round_trip_series():
    rng = random.Random(101)
    ctx = ExprContext(3, 3)
    from sflab.exactnum import EpsSeries
    for _ in range(10):
        S = EpsSeries([MultiVector.zero(3, 2, 3, 0)] + [random_multivector(rng, 3, 2) for _ in range(3)], 3)
        assert parse_series(format_series(S), ctx, 2) == S


def test_pi_example():
    P = parse_multivector("1 * e1^e3 + 1/2 * e2^e3", ExprContext(3, 3), 2)
    assert P.degree == 2
    assert set(P.comps) == {(0, 2), (1, 2)}
    assert P.comps[(1, 2)] == FourierScalar.constant(FieldElement(1) / 2, 3)


def test_fourier_atoms_and_precedence():
    ctx = ExprContext(2, 2)
    c = parse_expr("cos(1,0)", ctx)
    e = parse_expr("exp(1,0)/2 + exp(-1,0)/2", ctx)
    assert c == e
    s = parse_expr("sin(0,1)", ctx)
    assert parse_expr("(exp(0,1) - exp(0,-1)) / (2*i)", ctx) == s
    # the wedge binds tighter than the product
    assert parse_expr("2 * e1^e2", ctx) == parse_expr("(2 * e1)^e2", ctx)
    assert parse_expr("e2^e1", ctx) == parse_expr("-e1^e2", ctx)


def test_double_wedge_is_a_syntax_error():
    with pytest.raises(ManifestSyntaxError) as info:
        parse_expr("e1^^e2", ExprContext(3, 3), line=4)
    assert (info.value.line, info.value.col) == (4, 4)
    assert "<identifier>" in info.value.expected


def test_syntax_error_positions_in_manifest():
    text = T3_HEADER.replace("Pi = e1^e3", "Pi = e1^^e3")
    with pytest.raises(ManifestSyntaxError) as info:
        parse_manifest(text)
    assert info.value.line == 6
    assert info.value.col == 9
    with pytest.raises(ManifestSyntaxError):
        parse_manifest("[manifold\nn = 3\n")
    with pytest.raises(ManifestSyntaxError):
        parse_manifest("[manifold]\nn 3\n")
    with pytest.raises(ManifestSyntaxError):
        parse_expr("e1 $ e2", ExprContext(2, 2))


def test_type_errors():
    with pytest.raises(ManifestTypeError):
        parse_multivector("e1", ExprContext(3, 3), 2)
    with pytest.raises(ManifestTypeError):
        parse_manifest(T3_HEADER.replace("rank = 2", "rank = two"))
    with pytest.raises(ManifestTypeError):
        parse_slope("1 + i")


def test_semantic_errors():
    with pytest.raises(SemanticError):
        parse_manifest(T3_HEADER.replace("rank = 2", "rank = 1"))
    with pytest.raises(SemanticError):
        parse_manifest(T3_HEADER + "[splitting]\nG1 = e3\n")
    with pytest.raises(SemanticError):
        parse_manifest(T3_HEADER.replace("G0 = e2", "G0 = e2 ; e1"))
    with pytest.raises(SemanticError):
        parse_manifest("[nowhere]\n")
    with pytest.raises(SemanticError):
        parse_manifest("[manifold]\nn = 3\nwidth = 2\n")
    with pytest.raises(SemanticError):
        parse_manifest("[manifold]\nradical = 4\n")
    with pytest.raises(SemanticError):
        parse_series("order 1: 0 ; e1^e2 ; e1^e3", ExprContext(3, 3), 2)
    # complement inside the leaves
    man = parse_manifest(T3_HEADER.replace("G0 = e2", "G0 = e1 + rt*e2"))
    with pytest.raises(SemanticError):
        man.setup()


def test_frame_index_out_of_range():
    with pytest.raises(ManifestError):
        parse_expr("e4", ExprContext(3, 3))


def test_shipped_t3_manifest_parses_to_poisson_setup():
    man = load_manifest(MANIFESTS / "t3_kronecker.sfm")
    S = man.setup("G0")
    assert S.rank == 2
    from sflab.foliation.multivector import schouten
    assert schouten(S.Pi, S.Pi).is_zero()


# running checks

def test_empty_task_list():
    rep = run_tasks(parse_manifest("[task]\nchecks =\n"))
    assert rep.ok
    assert rep.text().endswith("summary = 0/0\n")


def test_unknown_check_is_an_error_record():
    rep = run_tasks(parse_manifest("[task]\nchecks = nonsense\n"))
    assert rep.checks[0].status == "ERROR"
    assert not rep.ok


def _with_deformation(series):
    return T3_HEADER + f"\n[deformation]\nZ = {series}\n\n[task]\nchecks = mc\ntrials = 1\npoints = 1\n"


T4_HEADER = """\
[manifold]
n = 4

[poisson]
Pi = e1^e2

[splitting]
TF = e1 ; e2
G0 = e3 ; e4
"""


def test_not_good_deformation_reported():
    # both slots of e3^e4 are transverse to the leaves
    text = T4_HEADER + "\n[deformation]\nZ = order 2: 0 ; e3^e4 ; 0\n\n[task]\nchecks = mc\ntrials = 1\npoints = 1\n"
    rep = run_tasks(parse_manifest(text))
    c = rep.checks[0]
    assert c.status == "ERROR" and c.witness.startswith("NotGood")


def test_non_small_deformation_reported():
    rep = run_tasks(parse_manifest(_with_deformation("order 2: e1^e3 ; 0 ; 0")))
    c = rep.checks[0]
    assert c.status == "ERROR" and c.witness.startswith("NonSmallDeformation")


def test_singular_sample_raises():
    from sflab.errors import SingularAtSample
    from sflab.exactnum import EpsSeries
    from sflab.foliation.dirac import rank_at_sample

    man = parse_manifest(T3_HEADER)
    S = man.setup()
    Z = EpsSeries([S.Pi.zero_like(2), S.Pi], 1)
    with pytest.raises(SingularAtSample):
        rank_at_sample(S, Z, (0, 0, 0), 1)


def test_given_deformation_manifest(capsys):
    code = main(["run", str(MANIFESTS / "given_deformation.sfm")])
    out = capsys.readouterr().out
    assert code == 0
    assert "value given_mc_zero = 1" in out


def test_cohomology_command(capsys):
    code = main(["cohomology", "--lambda", "1/2", "--cutoff", "10"])
    out = capsys.readouterr().out
    assert code == 0
    assert "  value H0 = 11\n" in out
    assert "  value H2_F = 33\n" in out
    assert "env lambda = 1/2" in out


def test_rt_cohomology_manifest(capsys):
    code = main(["run", str(MANIFESTS / "kronecker_cohomology.sfm")])
    out = capsys.readouterr().out
    assert code == 0
    assert "  value H2_F = 3\n" in out
    assert out.endswith("summary = 2/2\n")


def test_summary_of_three(capsys):
    text = "[task]\nchecks = cohomology, profile, cohomology\nlambda = rt\ncutoff = 5\n"
    rep = run_tasks(parse_manifest(text))
    assert rep.lines()[-1] == "summary = 3/3"


def test_failing_check_gives_witness_and_exit_one(tmp_path, capsys):
    # a stand-in check that always fails
    from sflab.cli import tasks

    def broken(cfg, res):
        res.value("residual", 1)
        res.fail("word (P, Q, R) of degrees (1, 1, 2)")

    tasks.CHECKS["broken"] = broken
    try:
        path = tmp_path / "bad.sfm"
        path.write_text("[task]\nchecks = broken, cohomology\nlambda = rt\ncutoff = 3\n")
        code = main(["run", str(path)])
    finally:
        del tasks.CHECKS["broken"]
    out = capsys.readouterr().out
    assert code == 1
    assert "check broken = FAIL\n  witness = word (P, Q, R) of degrees (1, 1, 2)\n" in out
    assert out.endswith("summary = 1/2\n")


def test_corrupted_jacobi_fails_with_witness(monkeypatch):
    from sflab.foliation import brackets

    orig = brackets.KoszulBrackets.__init__

    def flipped(self, setup, l3_sign=-1):
        orig(self, setup, l3_sign=1)

    monkeypatch.setattr(brackets.KoszulBrackets, "__init__", flipped)
    text = (MANIFESTS / "t4_twisted.sfm").read_text()
    man = parse_manifest(text)
    man.checks = ["jacobi"]
    man.params["trials"] = 30
    rep = run_tasks(man)
    c = rep.checks[0]
    assert c.status == "FAIL"
    assert c.witness and "arity" in c.witness


def test_bad_manifest_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.sfm"
    path.write_text(T3_HEADER.replace("Pi = e1^e3", "Pi = e1^^e3"))
    assert main(["run", str(path)]) == 2
    err = capsys.readouterr().err
    assert "ManifestSyntaxError" in err and "line 6, col 9" in err
    assert main(["run", str(tmp_path / "missing.sfm")]) == 2


def test_report_file_and_determinism(tmp_path):
    paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for p in paths:
        assert main(["run", str(MANIFESTS / "m2_closed_form.sfm"), "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_text().startswith("env seed = 3\n")


def test_determinism_with_random_checks():
    text = (MANIFESTS / "t3_kronecker.sfm").read_text()
    text = text.replace("checks = jacobi, mc, square, blocks, gauge, splitting-independence",
                        "checks = jacobi, square\ntrials = 5")
    a = run_tasks(parse_manifest(text)).text()
    b = run_tasks(parse_manifest(text)).text()
    assert a == b
    c = run_tasks(parse_manifest(text), seed=99).text()
    assert "env seed = 99" in c


def test_emit_report_returns_text(tmp_path):
    rep = run_tasks(parse_manifest("[task]\nchecks = cohomology\nlambda = 0\ncutoff = 3\n"))
    text = emit_report(rep, tmp_path / "r.txt")
    assert text == (tmp_path / "r.txt").read_text()
    assert "  value H0 = 7\n" in text


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "sflab.cli.main", "cohomology", "--lambda", "rt",
                          "--cutoff", "5"], capture_output=True, text=True, check=True).stdout
    assert "  value H2_F = 3\n" in out
