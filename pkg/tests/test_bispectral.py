from fractions import Fraction

import pytest

from nbjohnson.bispectral import (algebra_relations_check, build_quadruple, difference_coefficients,
                                  difference_relation_check, operator_matrix, relation_residuals)
from nbjohnson.exact import ExactMatrix
from nbjohnson.scheme import SchemeParams, a01_expansion, a10_expansion
from nbjohnson.spectra import SpectralData


def test_quadruple_shapes():
    params = SchemeParams(3, 2, 4)
    q = build_quadruple(params)
    assert q.Xstar.trace() == sum(i for i, _ in params.domain)
    assert q.X == operator_matrix(params, a10_expansion).shift(-params.k * (params.r - 2))
    assert q.Y == operator_matrix(params, a01_expansion)
    assert q.Xstar.is_diagonal() and q.Ystar.is_diagonal()


@pytest.mark.parametrize("rkn", [(3, 2, 3), (3, 2, 4), (4, 2, 5), (3, 3, 6), (3, 3, 4)])
def test_seven_relations(rkn):
    params = SchemeParams(*rkn)
    res = relation_residuals(params, *(lambda q: (q.X, q.Y, q.Xstar, q.Ystar))(build_quadruple(params)))
    assert len(res) == 7
    assert all(m.is_zero() for m in res.values())
    assert algebra_relations_check(params).passed


def test_relations_detect_perturbation():
    params = SchemeParams(3, 2, 4)
    q = build_quadruple(params)
    bumped = q.Y + ExactMatrix.diagonal([1] + [0] * (q.Y.dim - 1))
    res = relation_residuals(params, q.X, bumped, q.Xstar, q.Ystar)
    assert not all(m.is_zero() for m in res.values())


def test_constant_column_coefficients_telescope():
    P, J = difference_coefficients(SchemeParams(3, 2, 4), 0, 0)
    assert P[(0, 0)] == -sum(v for t, v in P.items() if t != (0, 0))
    assert J[(0, 0)] == -(J[(0, 1)] + J[(0, -1)])


@pytest.mark.parametrize("rkn", [(3, 2, 3), (3, 2, 4), (4, 2, 5), (3, 3, 6)])
def test_difference_relations(rkn):
    cert = difference_relation_check(SpectralData(SchemeParams(*rkn)))
    assert cert.passed, cert.witnesses
    assert cert.stats["closed-form-coefficients"] > 0


def test_boundary_uses_duality_route():
    params = SchemeParams(3, 2, 4)
    _, J = difference_coefficients(params, 0, 2)  # 2y + x = n
    assert None in J.values()
    cert = difference_relation_check(SpectralData(params))
    assert cert.passed and cert.stats["duality-fallbacks"] >= 1


def test_wrong_closed_form_is_reported(monkeypatch):
    import nbjohnson.bispectral as mod
    real = mod.difference_coefficients

    def skewed(params, x, y):
        P, J = real(params, x, y)
        if (x, y) == (1, 0):
            P = {t: (None if v is None else v + Fraction(1, 7)) for t, v in P.items()}
        return P, J

    monkeypatch.setattr(mod, "difference_coefficients", skewed)
    cert = mod.difference_relation_check(SpectralData(SchemeParams(3, 2, 4)))
    assert cert.verdict == "fail"
