import dataclasses
import json

import pytest

from supercong import cli
from supercong.cli import UsageError, emit_report, main, parse_args
from supercong.verifier import PROVEN_TAGS, STATEMENTS, ClosedForm, verify_case


@pytest.fixture(autouse=True)
def _isolated_cwd(tmp_path, monkeypatch):
    # the gamma command writes its default cache relative to the cwd
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("PCL_CACHE_DIR", raising=False)


def test_parse_verify_defaults():
    cfg = parse_args(["verify", "--statement", "T1_P5", "--p-max", "31", "--r-min", "-9", "--format", "json"])
    assert cfg.statements == ["T1_P5"]
    assert (cfg.p_min, cfg.p_max, cfg.r_min, cfg.r_max) == (3, 31, -9, 1)
    assert cfg.jobs >= 1 and not cfg.probe
    assert parse_args(["verify"]).statements == list(PROVEN_TAGS)
    assert parse_args(["verify", "-s", "T1_P5,T2_P5", "-s", "L31"]).statements == ["T1_P5", "T2_P5", "L31"]


def test_parse_gamma():
    cfg = parse_args(["gamma", "--p", "7", "--x", "1/3", "--precision", "1"])
    assert (cfg.subcommand, cfg.p, cfg.precision) == ("gamma", 7, 1)
    assert str(cfg.x) == "1/3"


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["verify", "--p-max", "2"], "--p-max"),
        (["verify", "--p-min", "11", "--p-max", "7"], "--p-max"),
        (["verify", "--r-max", "2"], "--r-max"),
        (["verify", "--statement", "NOPE"], "--statement"),
        (["verify", "--jobs", "0"], "--jobs"),
        (["lemmas", "--statement", "T1_P5"], "--statement"),
        (["gamma", "--p", "7", "--x", "one/3"], "--x"),
        (["gamma", "--p", "9", "--x", "1"], "--p"),
        (["identities", "--identity", "FOO"], "--identity"),
        (["verify", "--bogus"], "--bogus"),
    ],
)
def test_usage_errors_name_the_flag(argv, flag):
    with pytest.raises(UsageError, match=flag):
        parse_args(argv)
    assert main(argv) == 2


def test_gamma_command(capsys):
    assert main(["gamma", "--p", "7", "--x", "1/3", "--precision", "1"]) == 0
    assert capsys.readouterr().out == "Gamma_7(1/3) mod 7^1 = 4\n"
    assert main(["gamma", "--p", "7", "--x", "0", "-n", "3"]) == 0
    assert capsys.readouterr().out.endswith("= 1\n")
    assert main(["gamma", "--p", "7", "--x", "1/7"]) == 2


def test_gamma_large_modulus_skips_table(capsys, tmp_path):
    assert main(["gamma", "--p", "31", "--x", "1/3", "-n", "6", "--cache-dir", str(tmp_path)]) == 0
    assert list(tmp_path.iterdir()) == []
    assert capsys.readouterr().out.startswith("Gamma_31(1/3) mod 31^6 = ")


def test_gamma_cache_dir_from_env(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("PCL_CACHE_DIR", str(tmp_path / "env"))
    assert main(["gamma", "--p", "7", "--x", "2", "-n", "2"]) == 0
    assert (tmp_path / "env" / "gamma_p7_n2.bin").exists()
    # explicit flag beats the environment
    assert main(["gamma", "--p", "7", "--x", "2", "-n", "2", "--cache-dir", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "flag" / "gamma_p7_n2.bin").exists()


def test_emit_empty(capsys):
    emit_report([], "json", None)
    assert capsys.readouterr().out == "[]\n"


def test_emit_one_case(tmp_path):
    path = tmp_path / "r.json"
    emit_report([verify_case("GLS_P4", 7, 1)], "json", str(path))
    data = json.loads(path.read_text())
    assert len(data) == 1
    assert set(data[0]) == {"statement", "p", "r", "target", "valuation", "at_least", "verdict", "elapsed_ms"}
    assert data[0]["verdict"] == "HOLDS"
    assert path.read_bytes().endswith(b"\n")


def test_emit_csv_two_cases(capsys):
    cases = [verify_case("T2_P5", 7, 1), verify_case("T2_P5", 7, -2)]
    emit_report(cases, "csv", None)
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "statement,p,r,target,valuation,at_least,verdict,elapsed_ms"
    assert len(lines) == 3
    assert lines[1].startswith("T2_P5,7,-2,")


def test_verify_exit_codes(tmp_path):
    out = tmp_path / "t1.json"
    assert main(["verify", "-s", "T1_P5", "-j", "2", "-o", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert rows and all(r["verdict"] == "HOLDS" for r in rows)
    assert main(["verify", "-s", "VH_P4", "-o", str(out)]) == 0


def test_corrupted_statement_table_exits_one(monkeypatch, tmp_path):
    st = STATEMENTS["T1_P5"]

    def wrong(p, r):
        form = st.rhs(p, r)
        return ClosedForm(-form.coefficient, form.gammas)

    monkeypatch.setitem(STATEMENTS, "T1_P5", dataclasses.replace(st, rhs=wrong))
    out = tmp_path / "bad.json"
    assert main(["verify", "-s", "T1_P5", "-j", "1", "-o", str(out)]) == 1
    assert any(r["verdict"] == "FAILS" for r in json.loads(out.read_text()))


def test_conjectural_failures_do_not_fail_the_run(monkeypatch, tmp_path):
    st = STATEMENTS["C1II_P6"]
    monkeypatch.setitem(STATEMENTS, "C1II_P6", dataclasses.replace(st, rhs=lambda p, r: ClosedForm(p)))
    assert main(["verify", "-s", "C1II_P6", "-j", "1", "-o", str(tmp_path / "c.json")]) == 0


def test_unwritable_output_exits_three(tmp_path):
    assert main(["verify", "-s", "GLS_P4", "--p-max", "7", "-o", str(tmp_path)]) == 3
    assert main(["identities", "--identity", "SYM_SEXTIC", "-o", str(tmp_path)]) == 3


def test_exit_code_cross_check():
    rows = [{"statement": "C1I_P6", "verdict": "FAILS"}]
    assert cli.exit_code_for(rows) == 0
    rows.append({"statement": "T1_P5", "verdict": "FAILS"})
    assert cli.exit_code_for(rows) == 1


def test_reports_independent_of_jobs(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["verify", "-s", "T1_P5,LR_P6,C1I_P6", "--probe", "--format", "csv"]
    assert main(base + ["-j", "1", "-o", str(a)]) == 0
    assert main(base + ["-j", "4", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_timings_only_when_requested(tmp_path):
    out = tmp_path / "t.json"
    main(["verify", "-s", "GLS_P4", "-o", str(out)])
    assert all(r["elapsed_ms"] == 0 for r in json.loads(out.read_text()))


def test_identities_command(tmp_path):
    out = tmp_path / "ids.json"
    assert main(["identities", "--samples", "5", "--seed", "3", "-o", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert [r["identity"] for r in rows] == ["WHIPPLE_4F3", "LIU_7F6", "NEW_7F6",
                                              "A1_REFLECT", "SYM_QUINTIC", "SYM_SEXTIC"]
    assert all(r["failed"] == [] for r in rows)


def test_lemmas_command(capsys):
    assert main(["lemmas", "--p-max", "13"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["statement"] for r in rows} == {"L31", "L32", "L33", "L41", "L42", "L43"}
