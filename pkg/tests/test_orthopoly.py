from fractions import Fraction

import pytest

from nbjohnson.orthopoly import (PolynomialDomainError, binomial, eberlein, eberlein_alt, evaluate, hahn,
                                 hahn_parameter_shift_residual, hahn_recurrence_coeffs,
                                 hahn_recurrence_residual, hypergeometric_bridge_residuals,
                                 krawtchouk, krawtchouk_hat, krawtchouk_recurrence_residual,
                                 orthopoly_suite)


@pytest.mark.parametrize("a,b,expected", [(5, 2, 10), (7, -1, 0), (-1, 2, 1), (3, 5, 0), (0, 0, 1)])
def test_binomial(a, b, expected):
    assert binomial(a, b) == expected


def test_krawtchouk_values():
    assert all(krawtchouk(0, x, 6, 3) == 1 for x in range(7))
    assert krawtchouk(1, 0, 5, 4) == 3 * 5
    assert krawtchouk(2, 0, 2, 2) == 1


def test_eberlein_values():
    assert all(eberlein(0, x, 6, 3) == 1 for x in range(4))
    assert eberlein(1, 1, 4, 2) == 0
    assert eberlein(1, 0, 3, 2) == 2


def test_hahn_values():
    assert all(hahn(0, x, 6, 3) == 1 for x in range(4))
    assert hahn(1, 1, 4, 2) == 0
    assert hahn(1, 1, 3, 1) == -1


def test_hahn_undefined_point_raises():
    with pytest.raises(PolynomialDomainError):
        hahn(1, 2, 3, 1)


def test_eberlein_closed_forms_agree():
    for N in range(13):
        for p in range(N + 1):
            mu = min(p, N - p)
            for i in range(mu + 1):
                for x in range(mu + 1):
                    assert eberlein(i, x, N, p) == eberlein_alt(i, x, N, p)


def test_krawtchouk_recurrence_grid():
    assert all(krawtchouk_recurrence_residual(i, x, N, p) == 0
               for i in range(7) for x in range(7) for N in range(7) for p in range(7))
    assert krawtchouk_recurrence_residual(3, 2, 5, 3) == 0


def test_hahn_recurrence_example():
    a, _, _ = hahn_recurrence_coeffs(1, 4, 2)
    assert a == 1
    assert all(hahn_recurrence_residual(1, x, 4, 2) == 0 for x in range(3))
    assert all(hahn_recurrence_residual(0, x, 6, 3) == 0 for x in range(4))


def test_parameter_shift_examples():
    assert hahn_parameter_shift_residual(1, 1, 4, 2) == 0
    assert all(hahn_parameter_shift_residual(0, x, 6, 3) == 0 for x in range(3))
    for N in range(11):
        for p in range(1, N + 1):
            for r in range(p + 1):
                for x in range(min(p, N - p) + 1):
                    try:
                        assert hahn_parameter_shift_residual(r, x, N, p) == 0
                    except PolynomialDomainError:
                        pass


def test_bridges():
    assert krawtchouk(1, 1, 3, 3) == binomial(3, 1) * 2 * krawtchouk_hat(1, 1, Fraction(2, 3), 3)
    assert hypergeometric_bridge_residuals(0, 2, 6, 3) == (0, 0, 0)
    for N in range(9):
        for p in range(2, N + 1):
            mu = min(p, N - p)
            for i in range(min(mu, 4) + 1):
                for x in range(min(mu, 4) + 1):
                    assert hypergeometric_bridge_residuals(i, x, N, p) == (0, 0, 0)


def test_suite_passes_quickly():
    cert = orthopoly_suite(10)
    assert cert.passed, cert.witnesses
    assert cert.stats["parameter-shift"] > 0 and cert.stats["bridges"] > 0


def test_evaluate_dispatch():
    assert evaluate("krawtchouk", 0, 5, 9, 3) == 1
    assert evaluate("eberlein", 1, 0, 3, 2) == 2
    with pytest.raises(ValueError):
        evaluate("laguerre", 0, 0, 0, 0)
