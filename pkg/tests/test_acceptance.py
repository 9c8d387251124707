import pytest

from qshuffle.check_config import acceptance_suite
from qshuffle.verifier import run_spec

SUITE = acceptance_suite()


def _spec_id(spec):
    spins = "-".join(getattr(spec, key) for key in ("j1", "j2", "j3")).replace("/", "|")
    return f"{spec.name}-{spins}-D{spec.degree}-{spec.backend}"


@pytest.mark.slow
@pytest.mark.parametrize("spec", SUITE, ids=[_spec_id(s) for s in SUITE])
def test_acceptance(spec):
    report = run_spec(spec)
    assert report.error is None, report.error
    assert report.passed, report.witness
