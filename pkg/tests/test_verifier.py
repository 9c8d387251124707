import pytest

from qshuffle.check_config import CheckSpec
from qshuffle.constructors import HALF, Spin, build_K_half, build_R
from qshuffle.errors import QShuffleError, UsageError
from qshuffle.scalar import EXACT, NumericField
from qshuffle.series import MultiSeries, T, laurent_c
from qshuffle.verifier import (
    CHECKS, DEFAULT_TOL, Report, _Context, _flip, check_band, check_ddr, check_delta_suite, check_EF_suite, check_fm, check_fm_alt,
    check_gauge, check_K_consistency, check_limit, check_mixed, check_mutation, check_r_closed, check_r_fusion,
    check_rhat_fusion, check_unitarity, check_words, check_ybe, run_spec, run_suite,
)


@pytest.mark.parametrize("run", [
    lambda: check_fm("1/2", "1/2", 2),
    lambda: check_fm("1/2", "1", 2),
    lambda: check_fm_alt("1/2", "1/2", 2),
    lambda: check_ybe("1/2", "1/2", "1/2"),
    lambda: check_mixed("1/2", "1/2", "1/2"),
    lambda: check_EF_suite("1/2"),
    lambda: check_EF_suite(1),
    lambda: check_limit("1/2", 1),
    lambda: check_band(1, 1),
    lambda: check_r_closed(1),
    lambda: check_r_fusion("1/2", "1/2"),
    lambda: check_rhat_fusion("1/2", "1/2"),
    lambda: check_K_consistency("1/2", 4),
    lambda: check_K_consistency(1, 2),
    lambda: check_delta_suite(1, 4),
    lambda: check_ddr("1/2", 1),
    lambda: check_gauge("1/2", "1/2", 2),
    lambda: check_words(4),
], ids=[
    "fm", "fm-half-one", "fm_alt", "ybe", "mixed", "ef-half", "ef-one", "limit", "band", "r_closed",
    "r_fusion", "rhat_fusion", "k_consistency-half", "k_consistency-one", "delta", "ddr", "gauge", "words",
])
def test_fast_checks_pass(run):
    report = run()
    assert report.passed, report.witness
    assert report.witness is None
    assert report.error is None
    assert report.millis >= 0


def _lambda(j1, j2):
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    return (build_R(j1, j2, T, EXACT) @ build_R(j1, j2, T.inverse(), EXACT))[1, 1]


def test_unitarity_lambda_is_c_qt_times_c_q_over_t():
    report = check_unitarity("1/2", "1/2")
    assert report.passed
    expected = laurent_c(EXACT, T.times_v(2)).shuffle_mul(laurent_c(EXACT, T.inverse().times_v(2)))
    lam = _lambda("1/2", "1/2")
    assert lam == expected
    assert report.details["lambda"] == str(lam)


def test_unitarity_lambda_nonzero_for_mixed_spins():
    report = check_unitarity("1/2", "1")
    assert report.passed, report.witness
    lam = _lambda("1/2", "1")
    assert lam
    assert report.details["lambda"] == str(lam)


def test_nonzero_outcome_on_both_fields():
    ctx = _Context(EXACT, DEFAULT_TOL, {})
    assert ctx.nonzero("c", laurent_c(EXACT, T)).passed
    vanished = ctx.nonzero("c", MultiSeries(EXACT))
    assert not vanished.passed
    assert vanished.witness == {"identity": "c", "rows": 1, "cols": 1}

    field = NumericField(1.3)
    ctx = _Context(field, DEFAULT_TOL, {})
    assert ctx.nonzero("c", laurent_c(field, T)).passed
    vanished = ctx.nonzero("c", MultiSeries(field))
    assert not vanished.passed
    assert vanished.witness["q"] == 1.3
    assert ctx.max_residual == 0.0


def test_numeric_backend_records_residuals():
    report = check_fm("1/2", "1/2", 2, backend="numeric", q_values=[1.3, 1.7])
    assert report.passed
    assert report.params["backend"] == "numeric"
    assert set(report.details["max_residual"]) == {"1.3", "1.7"}
    assert all(r < 1e-8 for r in report.details["max_residual"].values())


def test_corrupted_K_gives_a_witness():
    base = build_K_half(4)
    broken = _flip(base, (1, 2, (0, 0, 0), ""))
    report = check_fm(HALF, HALF, 4, k_matrix=broken)
    assert not report.passed
    assert report.witness["identity"] == "RKRK"
    assert {"row", "col", "exp", "difference"} <= set(report.witness)


def test_injected_K_must_be_square_in_spin():
    with pytest.raises(UsageError):
        check_fm("1/2", "1", 2, k_matrix=build_K_half(2))


def test_mutation_detects_every_flip():
    report = check_mutation(degree=4, count=3, seed=1)
    assert report.passed, report.witness
    assert report.details["flipped"] == 3


def test_bad_parameters_raise():
    with pytest.raises(UsageError):
        check_fm("1/2", "1/2", -1)
    with pytest.raises(UsageError):
        check_delta_suite(-1, 2)
    with pytest.raises(UsageError):
        check_words(-1)
    with pytest.raises(UsageError):
        check_ybe("0", "1/2", "1/2")


def test_report_json_round_trip():
    report = Report("fm", {"j1": "1/2", "j2": "1/2", "degree": 2}, False,
                    witness={"identity": "RKRK", "row": 1}, millis=1.25, details={"flipped": 3})
    data = report.to_json()
    assert data["pass"] is False
    assert Report.from_json(data) == report
    assert "millis" not in report.to_json(timing=False)
    text = report.summary()
    assert text.startswith("FAIL  fm")
    assert "witness" in text


def test_run_spec_turns_errors_into_reports(monkeypatch):
    def boom(j, backend, q_values, tol):
        raise QShuffleError("no such luck")

    monkeypatch.setitem(CHECKS, "ef", (boom, ("j1",)))
    report = run_spec(CheckSpec("ef"))
    assert not report.passed
    assert report.error == "QShuffleError: no such luck"
    assert report.params == {"j1": "1/2"}


def test_run_suite_keeps_order():
    specs = [CheckSpec("words", max_n=2), CheckSpec("ef"), CheckSpec("band", "1", "1/2")]
    assert run_suite([]) == []
    serial = run_suite(specs)
    parallel = run_suite(specs, jobs=2)
    assert [r.check for r in parallel] == ["words", "ef", "band"]
    assert [r.to_json(timing=False) for r in parallel] == [r.to_json(timing=False) for r in serial]
    with pytest.raises(UsageError):
        run_suite(specs, jobs=0)


def test_reports_are_deterministic():
    spec = CheckSpec("mutation", degree=2, count=3, seed=7)
    assert run_spec(spec).to_json(timing=False) == run_spec(spec).to_json(timing=False)
