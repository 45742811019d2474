import json
import os
import subprocess
import sys

import pytest

from lfgraph.harness import (CLAIM_IDS, DEFAULT_SEED, REGISTRY, main,
                             report_to_json, report_to_text, run_verify)


def claims_by_id(report):
    return {c.id: c for c in report.claims}


def test_registry_well_formed():
    ids = [cid for cid, _ in REGISTRY]
    assert ids == sorted(ids)
    assert len(ids) == len(set(ids)) == 14
    assert all(locus for _, locus in REGISTRY)


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3)])
def test_every_claim_appears_once(q, n):
    report = run_verify(q, n)
    assert [c.id for c in report.claims] == list(CLAIM_IDS)


def test_report_2_2():
    report = run_verify(2, 2)
    by = claims_by_id(report)
    assert by["CARD-N2"].verdict == "match"
    assert by["CARD-N2"].formula == 48 and by["CARD-N2"].oracle == 48
    assert by["REG"].verdict == "property-pass"
    assert by["DOM-SIDE"].verdict == "match"
    # the whole-graph standard number is 3, not 2q+2 = 6
    std = by["DOM-WHOLE-STD"]
    assert std.verdict == "mismatch"
    assert std.formula == 6 and std.oracle == 3
    assert std.witness["solver"]
    assert by["DOM-WHOLE-TOT"].verdict == "match"
    assert by["CARD-GEN"].verdict == "skipped"
    assert not report.passed()


def test_report_2_3():
    report = run_verify(2, 3)
    by = claims_by_id(report)
    gen = by["CARD-GEN"]
    assert gen.verdict == "mismatch"
    assert gen.formula == 10080 and gen.oracle == 336
    assert by["STRUCT-N2"].verdict == "skipped"
    assert by["DOM-WHOLE-STD"].oracle == 4
    assert by["CARD-STAB"].verdict == "match"


def test_report_3_2_all_match():
    report = run_verify(3, 2)
    assert report.passed()
    by = claims_by_id(report)
    assert by["CARD-N2"].oracle == 98304
    assert by["CARD-STAB"].oracle == 256
    assert by["DOM-WHOLE-STD"].verdict == "match"


def test_claim_filter():
    report = run_verify(2, 2, claims=["REG", "TWIN"])
    by = claims_by_id(report)
    assert by["REG"].verdict == "property-pass"
    assert by["TWIN"].verdict == "property-pass"
    skipped = [c for c in report.claims if c.id not in ("REG", "TWIN")]
    assert all(c.verdict == "skipped" for c in skipped)
    assert all(c.witness == {"reason": "not selected"} for c in skipped)
    assert report.passed()
    with pytest.raises(ValueError):
        run_verify(2, 2, claims=["NOPE"])


def test_budget_marks_skipped():
    report = run_verify(2, 2, budget=0.0)
    assert all(c.verdict == "skipped" for c in report.claims)
    assert all(c.witness == {"reason": "budget exhausted"}
               for c in report.claims)


def test_json_rendering():
    report = run_verify(2, 2, seed=5)
    doc = json.loads(report_to_json(report))
    assert doc["q"] == 2 and doc["n"] == 2 and doc["seed"] == 5
    assert len(doc["claims"]) == 14
    for claim in doc["claims"]:
        assert set(claim) == {"id", "paper_locus", "formula", "oracle",
                              "verdict", "witness", "ms"}
        assert claim["ms"] is None
        if claim["formula"] is not None:
            assert isinstance(claim["formula"], str)
    card = next(c for c in doc["claims"] if c["id"] == "CARD-N2")
    assert card["formula"] == "48"


def test_json_deterministic_for_seed():
    a = report_to_json(run_verify(2, 2, seed=9))
    b = report_to_json(run_verify(2, 2, seed=9))
    assert a == b
    assert report_to_text(run_verify(2, 2, seed=9)) == \
        report_to_text(run_verify(2, 2, seed=9))


def test_text_rendering():
    text = report_to_text(run_verify(2, 2))
    assert text.startswith("instance q=2 n=2")
    assert "DOM-WHOLE-STD" in text
    assert text.rstrip().endswith("result: FAIL")


# ---------- CLI ----------

def run_cli(*argv):
    return main(list(argv))


def test_cli_autos_count(capsys):
    assert run_cli("autos", "count", "--q", "2", "--n", "2",
                   "--method", "both") == 0
    assert capsys.readouterr().out.strip() == "formula=48 brute=48"
    assert run_cli("autos", "count", "--q", "2", "--n", "3",
                   "--method", "both") == 1
    assert capsys.readouterr().out.strip() == "formula=10080 brute=336"
    assert run_cli("autos", "count", "--q", "3", "--n", "2",
                   "--method", "formula") == 0
    assert capsys.readouterr().out.strip() == "formula=98304"


def test_cli_build_guard(capsys):
    assert run_cli("build", "--q", "7", "--n", "9") == 2
    assert run_cli("build", "--q", "6", "--n", "2") == 2
    assert run_cli("build", "--q", "2", "--n", "2") == 0
    out = capsys.readouterr().out
    assert "vertices=6" in out


def test_cli_build_export(tmp_path, capsys):
    out = tmp_path / "g.g6"
    assert run_cli("build", "--q", "3", "--n", "2", "--export", "graph6",
                   "--out", str(out)) == 0
    from lfgraph.graph import parse_graph6
    n, edges = parse_graph6(out.read_bytes())
    assert n == 16 and len(edges) == 16
    assert run_cli("build", "--q", "2", "--n", "2", "--export", "json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["q"] == 2


def test_cli_invariants_and_lines(capsys):
    assert run_cli("invariants", "--q", "3", "--n", "2") == 0
    assert "classes-per-side=4" in capsys.readouterr().out
    assert run_cli("lines", "--q", "2", "--n", "2") == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 6
    assert out[0].startswith("vec (0,1):")


def test_cli_verify_single_instance(capsys):
    code = run_cli("verify", "--q", "3", "--n", "2", "--format", "json")
    captured = capsys.readouterr()
    assert code == 0
    doc = json.loads(captured.out)
    assert doc["q"] == 3
    code = run_cli("verify", "--q", "2", "--n", "2", "--format", "text")
    assert code == 1


def test_cli_verify_claims_filter(capsys):
    code = run_cli("verify", "--q", "2", "--n", "3", "--claims", "CARD-GEN",
                   "--format", "json")
    doc = json.loads(capsys.readouterr().out)
    assert code == 1
    gen = next(c for c in doc["claims"] if c["id"] == "CARD-GEN")
    assert gen["verdict"] == "mismatch"
    assert gen["formula"] == "10080" and gen["oracle"] == "336"
    rest = [c for c in doc["claims"] if c["id"] != "CARD-GEN"]
    assert all(c["verdict"] == "skipped" for c in rest)


def test_cli_verify_usage_error(capsys):
    assert run_cli("verify", "--q", "2") == 2
    assert run_cli("verify", "--q", "2", "--n", "3",
                   "--claims", "BOGUS") == 2


def test_cli_verify_budget(capsys):
    code = run_cli("verify", "--q", "2", "--n", "2", "--budget", "0",
                   "--format", "json")
    doc = json.loads(capsys.readouterr().out)
    assert code == 0  # nothing ran, nothing failed
    assert all(c["verdict"] == "skipped" for c in doc["claims"])


def test_cli_perm_files(tmp_path, capsys):
    from lfgraph.autos import perm_to_json, sigma_swap
    g = __import__("conftest").graph_for(2, 3)
    good = tmp_path / "sigma.json"
    good.write_text(perm_to_json(sigma_swap(g)))
    assert run_cli("autos", "check", "--perm", str(good)) == 0
    assert "automorphism=yes" in capsys.readouterr().out
    assert run_cli("autos", "decompose", "--perm", str(good)) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["swap"] is True
    missing = tmp_path / "missing.json"
    assert run_cli("autos", "check", "--perm", str(missing)) == 2


def test_cli_byte_identical_runs():
    exe = [sys.executable, "-m", "lfgraph.harness", "verify", "--q", "2",
           "--n", "2", "--seed", "123", "--format", "json"]
    env = dict(os.environ)
    a = subprocess.run(exe, capture_output=True, env=env)
    b = subprocess.run(exe, capture_output=True, env=env)
    assert a.returncode == b.returncode == 1
    assert a.stdout == b.stdout
    assert a.stdout  # non-empty report


def test_lfg_seed_env(capsys):
    env = dict(os.environ, LFG_SEED="777")
    exe = [sys.executable, "-m", "lfgraph.harness", "verify", "--q", "2",
           "--n", "2", "--claims", "REG", "--format", "json"]
    out = subprocess.run(exe, capture_output=True, env=env)
    assert json.loads(out.stdout)["seed"] == 777
    # an explicit flag wins over the environment
    out = subprocess.run(exe + ["--seed", "3"], capture_output=True, env=env)
    assert json.loads(out.stdout)["seed"] == 3
    env["LFG_SEED"] = "not-a-number"
    out = subprocess.run(exe, capture_output=True, env=env)
    assert out.returncode == 2


def test_default_seed_constant():
    report = run_verify(2, 2, claims=["REG"])
    assert report.seed == DEFAULT_SEED == 1729
