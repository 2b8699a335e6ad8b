"""CLI behavior: JSON reports, exit codes, determinism, round trips."""

import json
import math
import random

from espath.cli import main
from espath.graph import parse_edge_list
from helpers import random_connected_graph

P4 = "4 3\n0 1\n1 2\n2 3\n"
STAR4 = "4 3\n0 1\n0 2\n0 3\n"
C6 = "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n"
K2 = "2 1\n0 1\n"


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_solve_oracle_p4(tmp_path, capsys):
    f = _write(tmp_path, "p4.edges", P4)
    code, rep = _run(capsys, ["solve", f, "--method", "oracle", "--ell", "0"])
    assert code == 0
    assert rep["schema"] == 1
    assert rep["feasible"] is True
    assert rep["certificate"] == [0, 1, 2, 3]
    assert rep["method"] == "oracle"
    assert "timings" not in rep


def test_solve_infeasible_exit_code(tmp_path, capsys):
    f = _write(tmp_path, "c6.edges", C6)
    code, rep = _run(capsys, ["solve", f, "--method", "oracle", "--ell", "0"])
    assert code == 1 and rep["feasible"] is False


def test_verify_path_recomputed_example(tmp_path, capsys):
    # d(3, {0,1}) = 2 <= 2 and [0,1] is shortest, so the verdict is feasible
    f = _write(tmp_path, "p4.edges", P4)
    code, rep = _run(capsys, ["verify-path", f, "--path", "0,1", "--ell", "2"])
    assert code == 0
    assert rep["feasible"] is True and rep["shortest"] is True
    code, rep = _run(capsys, ["verify-path", f, "--path", "0,1", "--ell", "1"])
    assert code == 1 and rep["feasible"] is False
    # non-shortest walks are rejected outright
    code, rep = _run(capsys, ["verify-path", f, "--path", "0,1,2,1", "--ell", "3"])
    assert code == 1 and rep["valid_path"] is False


def test_certificate_round_trips_through_verify_path(tmp_path, capsys):
    rng = random.Random(7)
    for _ in range(6):
        g = random_connected_graph(rng, rng.randint(3, 6), 0.4)
        lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
        f = _write(tmp_path, "g.edges", "\n".join(lines) + "\n")
        code, rep = _run(capsys, ["optimum", f, "--method", "fvs"])
        assert code == 0
        path_arg = ",".join(str(v) for v in rep["certificate"])
        code2, rep2 = _run(capsys, ["verify-path", f, "--path", path_arg,
                                    "--ell", str(rep["ell"])])
        assert code2 == 0 and rep2["feasible"] is True


def test_methods_agree_on_feasible_bit(tmp_path, capsys):
    rng = random.Random(11)
    for _ in range(4):
        g = random_connected_graph(rng, rng.randint(3, 5), 0.5)
        lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
        f = _write(tmp_path, "g.edges", "\n".join(lines) + "\n")
        for ell in (0, 1, 2):
            bits = {}
            for method in ("oracle", "fvs", "dpd", "svd"):
                code, rep = _run(capsys, ["solve", f, "--method", method,
                                          "--ell", str(ell)])
                assert code in (0, 1)
                bits[method] = (code, rep["feasible"])
            assert len(set(bits.values())) == 1, (g.edges(), ell, bits)


def test_user_supplied_set_is_validated(tmp_path, capsys):
    f = _write(tmp_path, "star.edges", STAR4)
    code, _ = _run(capsys, ["solve", f, "--method", "dpd", "--ell", "1",
                            "--set", ""])
    assert code == 3  # the star's center has degree 3: not a path residual
    code, _ = _run(capsys, ["solve", f, "--method", "fvs", "--ell", "1",
                            "--set", "9"])
    assert code == 3
    code, rep = _run(capsys, ["solve", f, "--method", "fvs", "--ell", "1",
                              "--set", "0"])
    assert code == 0 and rep["parameter_set"] == [0]


def test_usage_errors(tmp_path, capsys):
    f = _write(tmp_path, "p4.edges", P4)
    assert main(["solve", str(tmp_path / "nope.edges"), "--method", "oracle",
                 "--ell", "0"]) == 2
    capsys.readouterr()
    assert main(["solve", f, "--method", "oracle", "--ell", "-1"]) == 2
    capsys.readouterr()
    assert main(["approx", f, "--eps", "0"]) == 2
    capsys.readouterr()
    assert main(["solve", f, "--method", "oracle", "--ell", "1",
                 "--set", "0"]) == 2
    capsys.readouterr()
    assert main(["verify-path", f, "--path", "0,x", "--ell", "1"]) == 2
    capsys.readouterr()
    assert main(["solve", f, "--method", "nope", "--ell", "1"]) == 2
    capsys.readouterr()
    bad = _write(tmp_path, "bad.edges", "not a graph\n")
    assert main(["stats", bad]) == 2
    capsys.readouterr()


def test_budget_exceeded_exit_code(tmp_path, capsys):
    f = _write(tmp_path, "c6.edges", C6)
    assert main(["solve", f, "--method", "fvs", "--ell", "2",
                 "--budget", "0"]) == 4
    capsys.readouterr()


def test_timings_only_on_request(tmp_path, capsys):
    f = _write(tmp_path, "p4.edges", P4)
    _, rep = _run(capsys, ["solve", f, "--method", "fvs", "--ell", "1"])
    assert "timings" not in rep
    _, rep = _run(capsys, ["solve", f, "--method", "fvs", "--ell", "1",
                           "--timings"])
    assert "total_s" in rep["timings"]


def test_jobs_do_not_change_output(tmp_path, capsys):
    f = _write(tmp_path, "c6.edges", C6)
    for method in ("oracle", "fvs", "dpd"):
        main(["optimum", f, "--method", method, "--jobs", "1"])
        one = capsys.readouterr().out
        main(["optimum", f, "--method", method, "--jobs", "8"])
        eight = capsys.readouterr().out
        assert one == eight and one.strip()


def test_gen_hard_emits_files(tmp_path, capsys):
    f = _write(tmp_path, "k2.edges", K2)
    out = str(tmp_path / "k2.hard")
    code, rep = _run(capsys, ["gen-hard", f, "--k", "1", "--out", out])
    assert code == 0 and rep["n"] == 14 and rep["k_prime"] == 2
    h = parse_edge_list((tmp_path / "k2.hard").read_text())
    assert h.n == 14
    sidecar = json.loads((tmp_path / "k2.hard.json").read_text())
    assert sidecar["k_prime"] == 2
    assert len(sidecar["x"]) == 2
    assert len(sidecar["labels"]) == 14
    # the generated instance is itself solvable: K2 has a dominating set
    code, rep = _run(capsys, ["solve", out, "--method", "oracle", "--ell", "2"])
    assert code == 0 and rep["feasible"] is True


def test_stats(tmp_path, capsys):
    f = _write(tmp_path, "c6.edges", C6)
    code, rep = _run(capsys, ["stats", f])
    assert code == 0
    assert rep["n"] == 6 and rep["m"] == 6 and rep["connected"] is True
    assert rep["radius"] == 3 and rep["diameter"] == 3
    assert rep["degree_min"] == 2 and rep["degree_max"] == 2


def test_approx_report_keeps_its_own_bound(tmp_path, capsys):
    f = _write(tmp_path, "c6.edges", C6)
    for eps in ("0.25", "0.5", "1.0"):
        code, rep = _run(capsys, ["approx", f, "--eps", eps])
        assert code == 0
        assert rep["eccentricity"] <= rep["ell"] + math.ceil(float(eps) * rep["ell"])
