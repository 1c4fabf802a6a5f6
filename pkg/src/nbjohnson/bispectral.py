"""Recurrence and difference operators acting on the span of the p_ij."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .certificate import Certificate, timed
from .exact import ExactMatrix, anticommutator, commutator, mat_mul
from .scheme import BiIndex, SchemeParams, a01_expansion, a10_expansion
from .spectra import SpectralData


@dataclass(frozen=True)
class OperatorQuadruple:
    basis: tuple[BiIndex, ...]
    X: ExactMatrix
    Y: ExactMatrix
    Xstar: ExactMatrix
    Ystar: ExactMatrix

    def to_json(self) -> dict:
        return {
            "basis": [list(ij) for ij in self.basis],
            **{name: [[str(v) for v in row] for row in getattr(self, name).rows()]
               for name in ("X", "Y", "Xstar", "Ystar")},
        }


def operator_matrix(params: SchemeParams, expand) -> ExactMatrix:
    """Column ``s`` holds the expansion of the operator applied to basis vector ``s``."""
    dom = params.domain
    pos = {ij: a for a, ij in enumerate(dom)}
    rows = [[0] * len(dom) for _ in dom]
    for s in dom:
        for t, c in expand(params, *s).items():
            rows[pos[t]][pos[s]] = c
    return ExactMatrix.from_rows(rows)


def build_quadruple(params: SchemeParams) -> OperatorQuadruple:
    dom = params.domain
    X = operator_matrix(params, a10_expansion).shift(-params.k * (params.r - 2))
    Y = operator_matrix(params, a01_expansion)
    Xs = ExactMatrix.diagonal([i for i, _ in dom])
    Ys = ExactMatrix.diagonal([j for _, j in dom])
    return OperatorQuadruple(dom, X, Y, Xs, Ys)


def relation_residuals(params: SchemeParams, X: ExactMatrix, Y: ExactMatrix,
                       Xs: ExactMatrix, Ys: ExactMatrix) -> dict[str, ExactMatrix]:
    """LHS - RHS of the seven commutation relations; all zero for the bispectral operators."""
    r, k, n = params.r, params.k, params.n
    I = ExactMatrix.identity(X.dim)
    XsX = commutator(Xs, X)
    YsY = commutator(Ys, Y)
    Ys_k = Ys - I.scale(k)
    out = {
        "[X,Y]": commutator(X, Y),
        "[X*,Y*]": commutator(Xs, Ys),
        "[X,Y*]": commutator(X, Ys),
        "gl2-1": commutator(Xs, XsX) - (X - Xs.scale(r - 3) - Ys_k.scale(r - 2)),
        "gl2-2": commutator(X, XsX) - (X.scale(r - 3) - Xs.scale((r - 1) ** 2)
                                       - Ys_k.scale((r - 1) * (r - 2))),
    }
    hahn1_rhs = (mat_mul(Ys, Ys).scale(-2 * (1 - r))
                 + mat_mul(I.scale(n * (1 - r)) - X, Ys)
                 + Y)
    out["hahn-1"] = commutator(Ys, YsY) - hahn1_rhs
    quad = (mat_mul(X, X) + X.scale(2 * (1 - r) * (n - 2 * k - 1))
            + I.scale((r - 1) ** 2 * (2 * n + (n - 2 * k) ** 2)))
    hahn2_rhs = (anticommutator(Y, Ys).scale(-2 * (r - 1))
                 + mat_mul(Y, X - I.scale(n * (1 - r)))
                 - (X + I.scale(k * (r - 1))).scale(2 * (k - n) * (r - 1))
                 - mat_mul(Ys, quad))
    out["hahn-2"] = commutator(Y, YsY) - hahn2_rhs
    return out


def algebra_relations_check(params: SchemeParams, quad: OperatorQuadruple | None = None) -> Certificate:
    cert = Certificate("bispectral-algebra", params)
    with timed(cert):
        quad = quad or build_quadruple(params)
        for name, res in relation_residuals(params, quad.X, quad.Y, quad.Xstar, quad.Ystar).items():
            hit = res.first_nonzero()
            if hit:
                i, j, val = hit
                cert.fail(index=[quad.basis[i], quad.basis[j]], expected=0, actual=val, relation=name)
            cert.count("relations")
        _operator_invariants(cert, params, quad)
    return cert


def _operator_invariants(cert: Certificate, params: SchemeParams, quad: OperatorQuadruple) -> None:
    if not quad.Xstar.is_diagonal() or not quad.Ystar.is_diagonal():
        cert.fail(detail="X* or Y* not diagonal")
    dom = quad.basis
    for a, t in enumerate(dom):
        for b, s in enumerate(dom):
            if quad.X[a, b] and not (t[1] == s[1] and abs(t[0] - s[0]) <= 1):
                cert.fail(index=[t, s], actual=quad.X[a, b], detail="X outside its stencil")
            di, dj = t[0] - s[0], t[1] - s[1]
            if quad.Y[a, b] and (di, dj) not in _Y_STENCIL:
                cert.fail(index=[t, s], actual=quad.Y[a, b], detail="Y outside its stencil")
    # X + x(r-1) annihilated jointly for x = 0..k
    acc = ExactMatrix.identity(len(dom))
    for x in range(params.k + 1):
        acc = mat_mul(acc, quad.X.shift(x * (params.r - 1)))
    if not acc.is_zero():
        cert.fail(detail="annihilating polynomial of X does not vanish")


_Y_STENCIL = {(0, 0), (0, -1), (1, 0), (-1, 0), (0, 1), (1, -1), (-1, 1), (2, -1), (-2, 1)}


# difference relations -----------------------------------------------------------

def _frac(num, den):
    return None if den == 0 else Fraction(num, den)


def difference_coefficients(params: SchemeParams, x: int, y: int):
    """Closed-form coefficients ``(i_rel, j_rel)`` as target -> value (None on a zero denominator)."""
    r, k, n = params.r, params.k, params.n
    B = _frac((y + x - k) * (y + x - n - 1) * (y + k - n), (2 * y + x - n) * (2 * y + x - n - 1))
    D = _frac(-y * (y + x - k - 1) * (y + k - n - 1), (2 * y + x - n - 1) * (2 * y + x - n - 2))
    den = (r - 1) * (n - x - 2 * y + 1)
    ratio = Fraction(r - 2, r - 1)
    P = {
        (x + 1, y): _frac(-(r - 2) * (n - x - y + 1) * (k - x - y), den),
        (x + 1, y - 1): _frac(y * (r - 2) * (y + k - n - 1), den),
        (x - 1, y): _frac(-(k - x + 1 - y) * x, den),
        (x - 1, y + 1): _frac(x * (y + k - n), den),
        (x, y - 1): None if D is None else -ratio * D,
        (x, y + 1): None if B is None else -ratio * B,
    }
    P[(x, y)] = None if None in P.values() else -sum(P.values())
    J = {
        (x, y + 1): B,
        (x, y): None if B is None or D is None else -(B + D),
        (x, y - 1): D,
    }
    return P, J


def duality_coefficients(spectral: SpectralData, x: int, y: int):
    """Coefficients of the same relations derived from Krein parameters and multiplicities."""
    params = spectral.params
    r, k, n = params.r, params.k, params.n
    xy = (x, y)
    m = spectral.multiplicities
    dom = spectral.domain
    J = {t: Fraction(0) for t in dom}
    if (0, 1) in dom:
        c = Fraction(k * (n - k), n)
        for t, q in spectral.krein((0, 1), xy).items():
            J[t] -= c / (n - 1) * q * m[t] / m[xy]
        J[xy] += c
    P = {t: -Fraction(r - 2, r - 1) * J[t] for t in dom}
    P[xy] += Fraction((r - 2) * k, r - 1)
    if (1, 0) in dom:
        for t, q in spectral.krein((1, 0), xy).items():
            P[t] -= Fraction(k, n * (r - 1)) * q * m[t] / m[xy]
    return P, J


def _merge(cert: Certificate, params: SchemeParams, closed: dict, dual: dict, where) -> dict:
    coeffs = {}
    for t, val in closed.items():
        if not params.in_domain(*t):
            continue
        if val is None:
            cert.count("duality-fallbacks")
            coeffs[t] = dual[t]
        else:
            cert.count("closed-form-coefficients")
            if val != dual[t]:
                cert.fail(index=[where, t], expected=dual[t], actual=val,
                          detail="closed-form coefficient differs from duality route")
            coeffs[t] = val
    for t, val in dual.items():
        if val and t not in coeffs:
            cert.fail(index=[where, t], actual=val, detail="duality route outside the stencil")
    return coeffs


def difference_relation_check(spectral: SpectralData) -> Certificate:
    params = spectral.params
    cert = Certificate("difference-relations", params)
    with timed(cert):
        dom = spectral.domain
        for xy in dom:
            closed_i, closed_j = difference_coefficients(params, *xy)
            dual_i, dual_j = duality_coefficients(spectral, *xy)
            rel_i = _merge(cert, params, closed_i, dual_i, ["i", xy])
            rel_j = _merge(cert, params, closed_j, dual_j, ["j", xy])
            for ij in dom:
                for label, coeffs, eig in (("i", rel_i, ij[0]), ("j", rel_j, ij[1])):
                    lhs = eig * spectral.P[(ij, xy)]
                    rhs = sum((c * spectral.P[(ij, t)] for t, c in coeffs.items()), Fraction(0))
                    if lhs != rhs:
                        cert.fail(index=[label, ij, xy], expected=lhs, actual=rhs, detail="residual")
                    cert.count("residuals")
    return cert
