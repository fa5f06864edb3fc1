import json

import pytest

from superyangian.cli import main
from superyangian.yangian import Yangian
from superyangian.suites import berezinian_closed_form_12


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_list_suites(capsys):
    code, out = run(capsys, "list-suites")
    assert code == 0
    names = [line.split()[0] for line in out.out.splitlines()]
    assert names == ["tensor-lemmas", "rtt", "center", "berezinian", "morphisms", "twisted-relations",
                     "twisted-center", "twisted-berezinian", "extended", "sylvester"]


def test_verify_tensor_lemmas_passes(capsys):
    code, out = run(capsys, "verify", "--suite", "tensor-lemmas", "-M", "1", "-N", "2", "-D", "3")
    assert code == 0
    assert "0 failed" in out.out


@pytest.mark.parametrize("argv", [
    ("verify", "-N", "3", "--suite", "twisted-relations"),
    ("verify", "--suite", "no-such-suite"),
    ("verify", "-M", "3", "-N", "3"),
    ("verify", "-D", "7"),
    ("verify", "--workers", "0"),
])
def test_configuration_errors_exit_2(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2
    assert "configuration error" in out.err


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--mode", "loose"])
    assert exc.value.code == 2


def test_json_report_is_deterministic_and_round_trips(capsys):
    argv = ("verify", "--suite", "rtt,center", "-M", "1", "-N", "1", "-D", "2", "--output", "json")
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv, "--workers", "2")
    assert first.out.replace('"workers": 2', '"workers": 1') == second.out.replace('"workers": 2', '"workers": 1')
    report = json.loads(first.out)
    assert json.dumps(report, indent=2, sort_keys=True) + "\n" == first.out
    assert set(report) == {"tool_version", "config", "checks", "total_runtime_ms"}
    for c in report["checks"]:
        assert {"name", "anchor", "params", "window", "status", "first_mismatch", "runtime"} <= set(c)
        assert c["status"] in ("pass", "fail", "skipped")


def test_timings_flag_records_runtimes(capsys):
    _, out = run(capsys, "verify", "--suite", "tensor-lemmas", "-M", "1", "-N", "1", "--output", "json", "--timings")
    report = json.loads(out.out)
    assert isinstance(report["total_runtime_ms"], int)
    assert all(isinstance(c["runtime"], int) for c in report["checks"])


def test_budget_marks_unfinished_suites_skipped(capsys):
    code, out = run(capsys, "verify", "--suite", "sylvester", "-M", "2", "-N", "2", "-D", "3",
                    "--budget-seconds", "0.5", "--output", "json")
    report = json.loads(out.out)
    assert code == 1
    assert [c["status"] for c in report["checks"]] == ["skipped"]
    assert "budget" in report["checks"][0]["note"]


def test_failures_give_exit_1_and_a_mismatch(capsys):
    code, out = run(capsys, "verify", "--suite", "twisted-center", "-M", "1", "-N", "2", "-D", "3",
                    "--output", "json")
    report = json.loads(out.out)
    assert code == 1
    failed = [c for c in report["checks"] if c["status"] == "fail"]
    assert [c["name"] for c in failed] == ["twisted-center.contraction-diagonal"]
    assert failed[0]["first_mismatch"]["key"]


def test_compute_z_at_counit(capsys):
    code, out = run(capsys, "compute", "z", "-M", "1", "-N", "2", "-D", "3", "--counit")
    assert code == 0 and out.out.strip() == "1"


def test_compute_z_tw_low_orders(capsys):
    code, out = run(capsys, "compute", "z-tw", "-M", "1", "-N", "2", "-D", "3")
    lines = out.out.strip().splitlines()
    assert code == 0 and lines[0] == "1"
    assert not any(l.startswith(("u^-1:", "u^-2:")) for l in lines)
    assert lines[1].startswith("u^-3:")


def test_compute_berezinian_matches_closed_form(capsys):
    code, out = run(capsys, "compute", "berezinian", "-M", "1", "-N", "2", "-D", "2")
    Y = Yangian(1, 2, 2)
    want = berezinian_closed_form_12(Y)
    expected = ["1"] + [f"u^-{k}: {want.coeffs[k].render()}" for k in sorted(want.coeffs) if k]
    assert code == 0 and out.out.strip().splitlines() == expected


def test_compute_twisted_targets_and_json(capsys):
    code, fusion = run(capsys, "compute", "berezinian-tw-fusion", "-M", "1", "-N", "2", "-D", "2")
    _, explicit = run(capsys, "compute", "berezinian-tw-explicit", "-M", "1", "-N", "2", "-D", "2")
    assert code == 0 and fusion.out == explicit.out
    _, js = run(capsys, "compute", "berezinian-tw-fusion", "-M", "1", "-N", "2", "-D", "2", "--output", "json")
    data = json.loads(js.out)
    assert data["window"] == "u^0..u^-2" and data["coefficients"]["0"] == "1"


def test_compute_minor(capsys):
    code, out = run(capsys, "compute", "minor", "-M", "1", "-N", "2", "-D", "2", "--p", "1", "--q", "0",
                    "--rows", "1", "--cols", "1")
    assert code == 0 and out.out.startswith("1")
    code, out = run(capsys, "compute", "minor", "-M", "1", "-N", "2", "-D", "2", "--p", "1", "--q", "0",
                    "--rows", "2", "--cols", "1")
    assert code == 2 and "invalid minor key" in out.err
    code, out = run(capsys, "compute", "minor", "-M", "1", "-N", "2", "-D", "2")
    assert code == 2


def test_compute_twisted_target_needs_even_n(capsys):
    code, out = run(capsys, "compute", "z-tw", "-M", "1", "-N", "1", "-D", "2")
    assert code == 2
