import numpy as np
import pytest

from resonant_ratchet.perturbation import ForceCurve
from resonant_ratchet.verify import (FAILED, INFO, PASSED, CheckResult, oracle_suite,
                                     print_report, published_suite, sign_agreement,
                                     symmetry_suite)


@pytest.fixture(scope='module')
def published():
    return {result.name: result for result in published_suite()}


def test_check_result_bounds():
    assert CheckResult.bounded('drift', 1e-13, 1e-12).status == PASSED
    assert CheckResult.bounded('drift', 1e-11, 1e-12).status == FAILED
    assert CheckResult.at_least('correlation', 0.9, 0.8).status == PASSED
    assert CheckResult.at_least('correlation', 0.7, 0.8).status == FAILED


def test_sign_agreement():
    k = np.arange(1.0, 6.0)
    theory = ForceCurve(k, [1.0, -2.0, 0.05, 3.0, -4.0], 'perturbative')
    numeric = ForceCurve(k, [0.5, -1.0, -9.0, -1.0, -3.0], 'numeric')
    # the 0.05 sample is below 10% of max |theory| and not counted
    assert sign_agreement(numeric, theory) == pytest.approx(0.75)


def test_print_report(capsys):
    print_report('demo', [CheckResult.bounded('drift', 1e-13, 1e-12, 'k=1'),
                          CheckResult('plateau', INFO, 0.2, 0.18)], colors=False)
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('=') and ' DEMO ' in lines[0]
    assert lines[1].split() == ['Check', 'Status', 'Value', 'Tolerance', 'Detail']
    assert lines[3].split() == ['drift', 'passed', '1.000e-13', '1.000e-12', 'k=1']
    assert lines[4].split() == ['plateau', 'info', '2.000e-01', '1.800e-01']
    assert len(set(len(line) for line in (lines[0], lines[2], lines[-1]))) == 1


def test_linear_growth(published):
    residual = published['linear growth residual']
    assert residual.status == PASSED
    assert residual.value <= 0.05
    slope = published['slope vs closed form']
    assert slope.status == PASSED
    assert slope.value <= 0.15


def test_q3_sweep_follows_closed_form(published):
    result = published['q=3 numeric vs closed form']
    assert result.status == PASSED
    assert result.value <= 0.15


def test_q5_sweep_sign_agreement(published):
    result = published['q=5 sign agreement']
    assert result.status == PASSED
    assert result.value >= 0.8


def test_asymmetric_state_correlation(published):
    result = published['asymmetric state correlation']
    assert result.status == PASSED
    assert result.value >= 0.8


def test_reported_rows(published):
    for name in ('current reversals matched', 'peak exponent [15, 40]',
                 'directionality at N=15'):
        assert published[name].status == INFO
    assert published['peak exponent [15, 40]'].value == pytest.approx(1.5, abs=0.1)


def test_oracle_suite_passes():
    results = oracle_suite()
    failed = [r for r in results if r.status != PASSED]
    assert not failed, failed


def test_symmetry_suite_passes():
    results = symmetry_suite()
    assert len(results) == 22
    # plane waves with L = 2 at q = 5 are outside the phase identity
    assert [r.status for r in results if r.status != PASSED] == ['inapplicable']
