import subprocess
import sys
from pathlib import Path

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "zinbiel", *args],
                          capture_output=True, text=True)


def test_validate_nilpotent_dim2():
    result = run_cli("validate", str(PROBLEMS / "nilpotent_dim2.zb"))
    assert result.returncode == 0
    assert "Zinbiel identity verified on 8 triples" in result.stdout


def test_rigidity_abelian_line_inconclusive():
    result = run_cli("rigidity", str(PROBLEMS / "abelian_line.zb"))
    assert result.returncode == 0
    assert "dim H^2(id,id) = 1" in result.stdout
    assert "inconclusive" in result.stdout


def test_extend_obstructed_line_fails_with_residual():
    result = run_cli("extend", str(PROBLEMS / "obstructed_line.zb"),
                     "--target-order", "2")
    assert result.returncode == 1
    assert "-1*e1" in result.stdout


def test_machine_output_has_stable_keys():
    result = run_cli("extend", str(PROBLEMS / "obstructed_line.zb"),
                     "--target-order", "2", "--output", "machine")
    assert result.returncode == 1
    lines = dict(
        line.split(" ", 1) for line in result.stdout.splitlines())
    assert lines["status"] == "fail"
    assert lines["failed.at"] == "2"
    assert lines["obstruction.entry"] == "R 1 1 1 1 -1"


def test_machine_and_report_scalars_agree():
    machine = run_cli("obstruction", str(PROBLEMS / "obstructed_line.zb"),
                      "--output", "machine")
    report = run_cli("obstruction", str(PROBLEMS / "obstructed_line.zb"))
    assert machine.returncode == report.returncode == 1
    assert "obstruction.entry R 1 1 1 1 -1" in machine.stdout
    assert "R(e1,e1,e1) -> -1*e1" in report.stdout


def test_cohomology_command_degrees():
    result = run_cli("cohomology", str(PROBLEMS / "abelian_line.zb"),
                     "--degree", "2", "--output", "machine")
    assert result.returncode == 0
    assert "h.dim 1" in result.stdout
    result = run_cli("cohomology", str(PROBLEMS / "abelian_line.zb"),
                     "--degree", "3", "--algebra", "R", "--output", "machine")
    assert result.returncode == 0
    assert "h.dim 1" in result.stdout


def test_check_and_normalize_graded_demo():
    path = str(PROBLEMS / "graded_dim3.zb")
    assert run_cli("check-deformation", path, "--deformation", "D"
                   ).returncode == 0
    result = run_cli("normalize", path, "--deformation", "D")
    assert result.returncode == 0
    assert "kills all terms through order 1" in result.stdout


def test_verify_identities_command():
    result = run_cli("verify-identities", str(PROBLEMS / "graded_dim3.zb"))
    assert result.returncode == 0
    assert "FAILED" not in result.stdout


def test_roundtrip_command():
    result = run_cli("roundtrip", str(PROBLEMS / "graded_dim3.zb"))
    assert result.returncode == 0
    assert result.stdout.startswith("field Q")


def test_field_override_flag():
    result = run_cli("validate", str(PROBLEMS / "nilpotent_dim2.zb"),
                     "--field", "Fp:7")
    assert result.returncode == 0


def test_extend_from_cochain_block(tmp_path):
    path = tmp_path / "cocycle.zb"
    path.write_text(
        "field Q\n"
        "algebra T3\n  dim 3\n"
        "  gamma 1 1 2 = 1\n  gamma 1 2 3 = 1\n  gamma 2 1 3 = 2\nend\n"
        "morphism id\n  source T3\n  target T3\n"
        "  entry 1 1 = 1\n  entry 2 2 = 1\n  entry 3 3 = 1\nend\n"
        # d of the 1-cochain pair (u1 -> u2, 0): a 2-coboundary, hence a
        # 2-cocycle that extends to any order
        "cochain seed\n  morphism id\n  degree 2\n"
        "  R 1 1 3 = 3\n  f 1 2 = 1\nend\n")
    result = run_cli("extend", str(path), "--cochain", "seed",
                     "--target-order", "3")
    assert result.returncode == 0, result.stdout + result.stderr
    result = run_cli("extend", str(path), "--cochain", "seed",
                     "--target-order", "3", "--output", "machine")
    assert "order 3" in result.stdout.splitlines()


def test_rigidity_demo_on_zero_dimensional_pair(tmp_path):
    path = tmp_path / "point.zb"
    path.write_text(
        "field Q\n"
        "algebra Z\n  dim 0\nend\n"
        "morphism f\n  source Z\n  target Z\nend\n")
    result = run_cli("rigidity", str(path), "--demo", "3", "--seed", "9")
    assert result.returncode == 0
    assert "rigid" in result.stdout
    assert "trivialized 3 of 3" in result.stdout


def test_check_deformation_order_flag():
    path = str(PROBLEMS / "graded_dim3.zb")
    result = run_cli("check-deformation", path, "--deformation", "D",
                     "--order", "0")
    assert result.returncode == 0
    assert "through order 0" in result.stdout


def test_normalize_rejects_non_coboundary_leading_term():
    # over the abelian line with the zero morphism the degree-1
    # differential vanishes, so the nonzero leading term has no preimage
    result = run_cli("normalize", str(PROBLEMS / "obstructed_line.zb"),
                     "--deformation", "D", "--output", "machine")
    assert result.returncode == 1
    assert "reason not-a-coboundary" in result.stdout


def test_cohomology_degree_3_of_morphism():
    result = run_cli("cohomology", str(PROBLEMS / "nilpotent_dim2.zb"),
                     "--degree", "3", "--morphism", "id",
                     "--output", "machine")
    assert result.returncode == 0
    assert "h.dim 1" in result.stdout.splitlines()


def test_verify_identities_flags_invalid_deformation(tmp_path):
    path = tmp_path / "broken.zb"
    path.write_text(
        "field Q\n"
        "algebra R\n  dim 1\nend\n"
        "morphism id\n  source R\n  target R\n  entry 1 1 = 1\nend\n"
        # (mu; mu; 0) satisfies order 1 but breaks the order-2 condition
        "deformation D\n  morphism id\n  order 2\n"
        "  term 1 R 1 1 1 = 1\n  term 1 S 1 1 1 = 1\nend\n")
    result = run_cli("verify-identities", str(path))
    assert result.returncode == 1
    assert "FAILED: deformation D: is a valid deformation" in result.stdout


def test_usage_errors_exit_2():
    assert run_cli("validate", "no_such_file.zb").returncode == 2
    assert run_cli("nonsense").returncode == 2
    assert run_cli("cohomology", str(PROBLEMS / "abelian_line.zb")
                   ).returncode == 2   # missing --degree
    assert run_cli("validate", str(PROBLEMS / "abelian_line.zb"),
                   "--field", "Fp:6").returncode == 2


def test_mathematical_failures_exit_1(tmp_path):
    bad = tmp_path / "bad.zb"
    bad.write_text("field Q\nalgebra R\n  dim 1\n  gamma 1 1 1 = 1\nend\n")
    result = run_cli("validate", str(bad))
    assert result.returncode == 1
    assert "FAILS" in result.stdout

    swap = tmp_path / "swap.zb"
    swap.write_text(
        "field Q\n"
        "algebra R\n  dim 2\n  gamma 1 1 2 = 1\nend\n"
        "morphism s\n  source R\n  target R\n"
        "  entry 1 2 = 1\n  entry 2 1 = 1\nend\n")
    result = run_cli("validate", str(swap))
    assert result.returncode == 1


def test_malformed_file_exit_2(tmp_path):
    bad = tmp_path / "syntax.zb"
    bad.write_text("field Q\nalgebra R\n  dim 1\n  gamma 1 1 2 = 1\nend\n")
    result = run_cli("validate", str(bad))
    assert result.returncode == 2
    assert "out of range" in result.stderr
