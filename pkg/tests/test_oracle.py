from fractions import Fraction

import pytest

from padic_hardy.functions import RadialShellFunction
from padic_hardy.oracle import OracleReport, naive_cmo_pow, naive_hardy, oracle_check, shells


def test_oracle_check_passes():
    rep = oracle_check(seed=5, cases=12)
    assert rep.cases == 12 and rep.checks > 1000
    assert rep.passed, rep.counterexamples


def test_oracle_detects_a_wrong_value():
    rep = OracleReport()
    rep.check(True, "fine")
    rep.check(False, "broken", m=3)
    assert not rep.passed and rep.counterexamples == [{"check": "broken", "m": "3"}]


def test_oracle_window_limit():
    with pytest.raises(ValueError):
        oracle_check(cases=1, max_width=13)


def test_naive_oracles_by_hand():
    b0 = {k: Fraction(1) for k in range(-40, 1)}
    # H chi_{B_0} at shell 2 is |B_0| / |B_2| = 1/4, minus the truncated mass |B_{-41}| / 4
    assert naive_hardy(b0, 2, 1, 2) == Fraction(1, 4) - Fraction(1, 4 * 2**41)
    assert naive_cmo_pow(shells(RadialShellFunction.shell_indicator(2, 1, 0)), 2, 1, 1) > 0
    with pytest.raises(ValueError):
        shells(RadialShellFunction.constant(2, 1, 1))
