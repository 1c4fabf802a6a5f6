from fractions import Fraction

import pytest

from nbjohnson.certificate import InvariantViolation
from nbjohnson.polystructure import (ONE, P_TYPE, Q_TYPE, BivariatePolynomial, OrderType, X, Y, certify_P,
                                     certify_Q, construct_v, construct_v_star, deg_lex_leq,
                                     domain_compatible, dual_recurrence_check, mu_star_coefficients,
                                     partial_leq, poly_compatible)
from nbjohnson.scheme import SchemeParams
from nbjohnson.spectra import SpectralData

from conftest import instance


def test_deg_lex():
    assert not deg_lex_leq(1, 1, 2, 0)
    assert deg_lex_leq(2, 0, 1, 1)
    assert deg_lex_leq(0, 0, 3, 2)


def test_partial_orders():
    for m in range(4):
        for n in range(4):
            for i in range(4):
                for j in range(4):
                    assert partial_leq(P_TYPE, m, n, i, j) == (m + n <= i + j and n <= j)
    assert partial_leq(Q_TYPE, 0, 2, 2, 1)
    assert all(partial_leq(Q_TYPE, i, j, i, j) for i in range(4) for j in range(4))
    with pytest.raises(ValueError):
        OrderType(2, 0)


def test_domain_compatibility():
    cert = domain_compatible(SchemeParams(3, 3, 4).domain, Q_TYPE)
    assert cert.verdict == "fail"
    assert any(w["index"] == [0, 2] and w["below"] == [2, 1] for w in cert.witnesses)
    assert domain_compatible(SchemeParams(3, 2, 4).domain, Q_TYPE).passed
    for rkn in [(3, 2, 3), (3, 3, 4), (3, 4, 5), (3, 2, 2)]:
        assert domain_compatible(SchemeParams(*rkn).domain, P_TYPE).passed


def test_polynomial_arithmetic():
    p = (X + ONE) * (Y - ONE)
    assert p(2, 3) == 6
    assert p.coefficient(1, 1) == 1 and p.coefficient(0, 0) == -1
    assert poly_compatible(ONE, (0, 0), P_TYPE)
    x2y = X * X * Y
    assert not poly_compatible(x2y, (1, 1), P_TYPE)
    assert not poly_compatible(x2y, (1, 1), Q_TYPE)


def test_v_polynomials():
    params = SchemeParams(3, 2, 4)
    v = construct_v(params)
    assert v[(0, 0)] == ONE
    assert v[(1, 0)] == X
    spectral = SpectralData(params)
    assert v[(1, 0)](*spectral.point((0, 0))) == params.k * (params.r - 2)
    assert all(poly_compatible(p, ij, P_TYPE) for ij, p in v.items())


def test_v_star_polynomials():
    params = SchemeParams(3, 2, 4)
    spectral = SpectralData(params)
    vs = construct_v_star(spectral)
    assert vs[(0, 0)] == ONE
    assert vs[(1, 0)](*spectral.dual_point((0, 0))) == (params.r - 2) * params.n
    assert all(poly_compatible(p, ij, Q_TYPE) for ij, p in vs.items())


@pytest.mark.parametrize("rkn", [(3, 2, 3), (3, 2, 4), (4, 2, 5), (3, 3, 6), (3, 2, 2)])
def test_certify_P(rkn):
    assert certify_P(SchemeParams(*rkn)).passed


def test_certify_P_rejects_tampered_polynomial():
    params = SchemeParams(3, 2, 4)
    v = construct_v(params)
    v[(1, 1)] = v[(1, 1)] + X * X * X
    cert = certify_P(params, polys=v)
    assert cert.verdict == "fail"
    assert any(w.get("monomial") == [3, 0] for w in cert.witnesses)


@pytest.mark.parametrize("rkn", [(3, 2, 3), (3, 2, 4), (4, 2, 5), (3, 3, 6), (3, 3, 5)])
def test_certify_Q_in_range(rkn):
    cert = certify_Q(SpectralData(SchemeParams(*rkn)))
    assert cert.passed, cert.witnesses


def test_certify_Q_below_range():
    cert = certify_Q(SpectralData(SchemeParams(3, 3, 4)))
    assert cert.verdict == "fail"
    assert any(w.get("detail") == "(0,2) ≼ (2,1) ∉ D" for w in cert.witnesses)
    assert cert.stats["krein-route-pass"] == cert.stats["polynomial-route-pass"] == 0


def test_certify_Q_rejects_tampered_polynomial():
    spectral = SpectralData(SchemeParams(3, 2, 4))
    vs = construct_v_star(spectral)
    vs[(1, 1)] = vs[(1, 1)] + X * X * X
    with pytest.raises(InvariantViolation):
        certify_Q(spectral, polys=vs)


@pytest.mark.parametrize("rkn", [(3, 2, 3), (3, 2, 4), (4, 2, 5), (3, 3, 6)])
def test_dual_recurrences(rkn):
    _, spectral, _ = instance(*rkn)
    cert = dual_recurrence_check(spectral)
    assert cert.passed, cert.witnesses
    assert cert.stats.get("closed-form-coefficients", 0) > 0


def test_dual_recurrence_zero_over_zero_boundary():
    params = SchemeParams(3, 2, 4)
    coeffs = mu_star_coefficients(params, 0, 2)
    assert None in coeffs.values()
    cert = dual_recurrence_check(SpectralData(params))
    assert cert.passed and cert.stats["krein-fallbacks"] >= 1
