import math

from click.testing import CliRunner

from basiscert.cli import cli, main

CAN2 = """\
bvs 1
norm lp 2.0
dim 2
count 2
v 1.0 0.0
v 0.0 1.0
"""

SUM2 = """\
bvs 1
norm sup
dim 2
count 2
v 1.0 0.0
v 1.0 1.0
"""


def run(args, files=None):
    runner = CliRunner()
    with runner.isolated_filesystem():
        for name, text in (files or {}).items():
            with open(name, "w") as fh:
                fh.write(text)
        return runner.invoke(cli, args, standalone_mode=False)


def grab(output, key):
    for line in output.splitlines():
        if line.startswith(f"{key} = "):
            return line.split(" = ", 1)[1]
    raise KeyError(key)


def test_analyze_orthonormal():
    res = run(["analyze", "b.bvs"], {"b.bvs": CAN2})
    assert res.exit_code == 0
    assert grab(res.output, "K") == "1.0"
    assert grab(res.output, "M") == "1.0"
    assert grab(res.output, "K.method") == "exact-spectral"
    assert grab(res.output, "functional_bound_ok") == "yes"


def test_grunblum_summing():
    res = run(["grunblum", "s.bvs"], {"s.bvs": SUM2})
    assert float(grab(res.output, "K")) == 2.0
    assert grab(res.output, "P_1.method") == "exact-matrix-norm"


def test_uncond_summing():
    res = run(["uncond", "s.bvs"], {"s.bvs": SUM2})
    assert float(grab(res.output, "unconditional_constant")) == 3.0


def test_perturb_refused_is_exit_zero():
    cand = CAN2.replace("v 1.0 0.0", "v 1.0 1.2").replace("v 0.0 1.0", "v 1.2 1.0")
    res = run(["perturb", "b.bvs", "c.bvs"], {"b.bvs": CAN2, "c.bvs": cand})
    assert res.exit_code == 0
    assert grab(res.output, "status") == "refused"
    lam = float(grab(res.output, "lambda"))
    assert lam >= 1.0


def test_perturb_certified_reports_bound():
    cand = CAN2.replace("v 1.0 0.0", "v 1.0 0.1").replace("v 0.0 1.0", "v 0.1 1.0")
    res = run(
        ["--samples", "2000", "perturb", "b.bvs", "c.bvs"],
        {"b.bvs": CAN2, "c.bvs": cand},
    )
    assert res.exit_code == 0
    assert grab(res.output, "status") == "certified"
    assert float(grab(res.output, "sandwich_violations")) == 0
    assert float(grab(res.output, "perturbed_K")) <= float(
        grab(res.output, "perturbed_K_bound")
    ) + 1e-6


def test_select_end_to_end(tmp_path):
    runner = CliRunner()
    with runner.isolated_filesystem():
        r = runner.invoke(cli, ["gen", "canonical", "--dim", "16", "--count", "16",
                                "-o", "b.bvs"], standalone_mode=False)
        assert r.exit_code == 0
        r = runner.invoke(cli, ["gen", "moving-support", "--dim", "16", "--count", "6",
                                "--magnitude", "0.01", "-o", "c.bvs"],
                          standalone_mode=False)
        assert r.exit_code == 0
        res = runner.invoke(cli, ["--samples", "2000", "select", "b.bvs", "c.bvs"],
                            standalone_mode=False)
        assert res.exit_code == 0
        assert grab(res.output, "status") == "certified"
        assert float(grab(res.output, "lambda_sel")) < 1.0
        assert grab(res.output, "selected_indices")


def test_select_hypothesis_failure_exits_zero():
    const = "bvs 1\nnorm lp 2.0\ndim 4\ncount 3\n" + "v 1.0 0.0 0.0 0.0\n" * 3
    can4 = "bvs 1\nnorm lp 2.0\ndim 4\ncount 4\n" + "".join(
        "v " + " ".join("1.0" if i == j else "0.0" for j in range(4)) + "\n"
        for i in range(4)
    )
    res = run(["select", "b.bvs", "c.bvs"], {"b.bvs": can4, "c.bvs": const})
    assert res.exit_code == 0
    assert grab(res.output, "status") == "hypothesis-failed"
    assert grab(res.output, "witness_coordinate") == "1"


def test_oracle_opnorm():
    res = run(["--samples", "2000", "oracle", "opnorm", "s.bvs", "--m", "1"],
              {"s.bvs": SUM2})
    assert res.exit_code == 0
    assert abs(float(grab(res.output, "P_1")) - 2.0) < 0.02
    assert grab(res.output, "P_1.method") == "oracle-estimate"


def test_csv_carries_same_numeric_fields():
    text = run(["grunblum", "s.bvs"], {"s.bvs": SUM2}).output
    csv = run(["--format", "csv", "grunblum", "s.bvs"], {"s.bvs": SUM2}).output
    lines = csv.splitlines()
    assert lines[0] == "key,value,method,uncertainty"
    csv_pairs = {l.split(",")[0]: l.split(",")[1] for l in lines[1:]}
    for key in ("K", "M", "P_1", "P_2"):
        assert csv_pairs[key] == grab(text, key)


def test_exit_codes_via_main(tmp_path):
    bad = tmp_path / "bad.bvs"
    bad.write_text("bvs 1\nnorm lp 2.0\ncount 2\nv 1 0\nv 0 1\n")
    assert main(["analyze", str(bad)]) == 1

    dep = tmp_path / "dep.bvs"
    dep.write_text("bvs 1\nnorm lp 2.0\ndim 2\ncount 2\nv 1.0 0.0\nv 1.0 0.0\n")
    assert main(["analyze", str(dep)]) == 2

    assert main(["analyze", str(tmp_path / "missing.bvs")]) == 1


def test_selection_exhaustion_exit_code(tmp_path):
    # two candidates cannot yield three blocks
    basis = tmp_path / "b.bvs"
    cand = tmp_path / "c.bvs"
    basis.write_text(
        "bvs 1\nnorm lp 2.0\ndim 8\ncount 8\n"
        + "".join(
            "v " + " ".join("1.0" if i == j else "0.0" for j in range(8)) + "\n"
            for i in range(8)
        )
    )
    cand.write_text(
        "bvs 1\nnorm lp 2.0\ndim 8\ncount 2\n"
        "v 0.0 1.0 0.0 0.0 0.0 0.0 0.0 0.0\n"
        "v 0.0 0.0 0.0 1.0 0.0 0.0 0.0 0.0\n"
    )
    assert main(["select", str(basis), str(cand), "--min-blocks", "3"]) == 3


def test_gen_deterministic_output():
    a = run(["--seed", "5", "gen", "perturbed", "--dim", "4", "--count", "3",
             "--magnitude", "0.1"])
    b = run(["--seed", "5", "gen", "perturbed", "--dim", "4", "--count", "3",
             "--magnitude", "0.1"])
    assert a.output == b.output
    assert a.output.startswith("bvs 1\n")


def test_gen_respects_norm_flag():
    out = run(["gen", "canonical", "--dim", "3", "--count", "2", "--norm", "lp 1.0"]).output
    assert "norm lp 1.0" in out
