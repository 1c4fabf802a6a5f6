"""Bivariate polynomials, monomial orders and P-/Q-polynomial certification."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .certificate import Certificate, InvariantViolation, timed
from .scheme import BiIndex, SchemeParams, a01_expansion, a10_expansion
from .spectra import SpectralData


class BivariatePolynomial:
    """Finitely supported map from exponent pairs ``(m, n)`` to rationals."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict | None = None):
        self._c = {}
        for mono, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                self._c[(int(mono[0]), int(mono[1]))] = c

    @classmethod
    def constant(cls, c) -> "BivariatePolynomial":
        return cls({(0, 0): c})

    @property
    def coefficients(self) -> dict:
        return dict(self._c)

    def support(self) -> list[BiIndex]:
        return sorted(self._c)

    def coefficient(self, m: int, n: int) -> Fraction:
        return self._c.get((m, n), Fraction(0))

    def __add__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        out = dict(self._c)
        for mono, c in other._c.items():
            out[mono] = out.get(mono, 0) + c
        return BivariatePolynomial(out)

    def __neg__(self) -> "BivariatePolynomial":
        return self.scale(-1)

    def __sub__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        return self + (-other)

    def scale(self, c) -> "BivariatePolynomial":
        c = Fraction(c)
        return BivariatePolynomial({m: v * c for m, v in self._c.items()})

    def mul_x(self) -> "BivariatePolynomial":
        return BivariatePolynomial({(m + 1, n): c for (m, n), c in self._c.items()})

    def mul_y(self) -> "BivariatePolynomial":
        return BivariatePolynomial({(m, n + 1): c for (m, n), c in self._c.items()})

    def __mul__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return self.scale(other)
        out: dict = {}
        for (a, b), c in self._c.items():
            for (d, e), f in other._c.items():
                out[(a + d, b + e)] = out.get((a + d, b + e), 0) + c * f
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __call__(self, x, y) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        return sum((c * x**m * y**n for (m, n), c in self._c.items()), Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self._c == other._c

    __hash__ = None

    def to_json(self) -> list:
        return [{"monomial": [m, n], "coefficient": str(self._c[(m, n)])} for m, n in self.support()]

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for m, n in sorted(self._c, reverse=True):
            mono = "*".join(s for s in (
                "" if m == 0 else ("x" if m == 1 else f"x^{m}"),
                "" if n == 0 else ("y" if n == 1 else f"y^{n}")) if s)
            terms.append(f"({self._c[(m, n)]})" + (f"*{mono}" if mono else ""))
        return " + ".join(terms)


X = BivariatePolynomial({(1, 0): 1})
Y = BivariatePolynomial({(0, 1): 1})
ONE = BivariatePolynomial.constant(1)


# monomial orders --------------------------------------------------------------

def deg_lex_leq(m: int, n: int, i: int, j: int) -> bool:
    return m + n < i + j or (m + n == i + j and n <= j)


@dataclass(frozen=True)
class OrderType:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if not (0 <= self.alpha <= 1 and 0 <= self.beta < 1):
            raise ValueError(f"need 0 <= alpha <= 1 and 0 <= beta < 1, got {self}")

    def __str__(self) -> str:
        return f"({self.alpha},{self.beta})"


P_TYPE = OrderType(1, 0)
Q_TYPE = OrderType(0, Fraction(1, 2))


def partial_leq(order: OrderType, m: int, n: int, i: int, j: int) -> bool:
    a, b = order.alpha, order.beta
    return m + a * n <= i + a * j and b * m + n <= b * i + j


def below(order: OrderType, i: int, j: int) -> list[BiIndex]:
    """All ``(m, n)`` in N^2 with ``(m, n) <= (i, j)`` in the partial order."""
    mmax = math.floor(i + order.alpha * j)
    nmax = math.floor(order.beta * i + j)
    return [(m, n) for m in range(mmax + 1) for n in range(nmax + 1)
            if partial_leq(order, m, n, i, j)]


def domain_compatible(domain: Iterable[BiIndex], order: OrderType, check: str = "domain-compatibility",
                      params: SchemeParams | None = None) -> Certificate:
    cert = Certificate(check, params)
    with timed(cert):
        dom = set(domain)
        for i, j in sorted(dom):
            for m, n in below(order, i, j):
                if (m, n) not in dom:
                    cert.fail(index=[m, n], below=[i, j], order=str(order),
                              detail=f"({m},{n}) ≼ ({i},{j}) ∉ D")
    return cert


def compatibility_violations(p: BivariatePolynomial, degree: BiIndex, order: OrderType) -> list[BiIndex]:
    """Support monomials not below ``degree``; ``[degree]`` itself if absent."""
    i, j = degree
    if p.coefficient(i, j) == 0:
        return [degree]
    return [mono for mono in p.support() if not partial_leq(order, *mono, i, j)]


def poly_compatible(p: BivariatePolynomial, degree: BiIndex, order: OrderType) -> bool:
    return not compatibility_violations(p, degree, order)


# construction from recurrences ------------------------------------------------

def _solve_for(target: BiIndex, generator: BivariatePolynomial, source: BiIndex,
               coeffs: dict, polys: dict, cert: Certificate | None) -> BivariatePolynomial | None:
    """From ``g * v_source = sum_t c_t v_t`` isolate ``v_target``."""
    lead = coeffs.get(target, 0)
    if lead == 0:
        if cert is None:
            raise InvariantViolation(f"zero leading coefficient for {target} from {source}")
        cert.fail(index=target, source=list(source), detail="leading structure constant vanishes")
        return None
    acc = generator * polys[source]
    for t, c in coeffs.items():
        if t == target or c == 0:
            continue
        if t not in polys:
            if cert is None:
                raise InvariantViolation(f"recurrence for {target} needs unbuilt {t}")
            cert.fail(index=target, source=list(source), needs=list(t),
                      detail="recurrence references an index not yet constructed")
            return None
        acc = acc - polys[t].scale(c)
    return acc.scale(Fraction(1) / lead)


def construct_v(params: SchemeParams) -> dict[BiIndex, BivariatePolynomial]:
    """``v_ij`` with ``A_ij = v_ij(A_10, A_01)``, built from the adjacency recurrences."""
    polys = {(0, 0): ONE}
    for j in range(params.jmax + 1):
        if j > 0:
            polys[(0, j)] = _solve_for((0, j), Y, (0, j - 1),
                                       a01_expansion(params, 0, j - 1), polys, None)
        i = 0
        while params.in_domain(i + 1, j):
            polys[(i + 1, j)] = _solve_for((i + 1, j), X, (i, j),
                                           a10_expansion(params, i, j), polys, None)
            i += 1
    return {ij: polys[ij] for ij in params.domain}


def construct_v_star(spectral: SpectralData, cert: Certificate | None = None) -> dict[BiIndex, BivariatePolynomial]:
    """``v*_ij`` with ``v E_ij = v*_ij(v E_10, v E_01)`` under the Hadamard product.

    The structure constants are Krein parameters.  Indices that cannot be
    built are reported on ``cert`` (or raise without one) and left out.
    """
    params = spectral.params
    polys = {(0, 0): ONE}
    for j in range(params.jmax):
        if not params.in_domain(0, j + 1) or (0, j) not in polys:
            break
        built = _solve_for((0, j + 1), Y, (0, j), spectral.krein((0, 1), (0, j)), polys, cert)
        if built is None:
            break
        polys[(0, j + 1)] = built
    for i in range(params.k):
        for j in range(params.jmax + 1):
            if not params.in_domain(i + 1, j) or (i, j) not in polys:
                continue
            if not params.in_domain(1, 0):
                continue
            built = _solve_for((i + 1, j), X, (i, j), spectral.krein((1, 0), (i, j)), polys, cert)
            if built is not None:
                polys[(i + 1, j)] = built
    return {ij: polys[ij] for ij in params.domain if ij in polys}


def _evaluation_check(cert: Certificate, polys: dict, table: dict, domain,
                      point: Callable) -> None:
    for ij, poly in polys.items():
        for xy in domain:
            val = poly(*point(xy))
            if val != table[(ij, xy)]:
                cert.fail(index=[ij, xy], expected=table[(ij, xy)], actual=val,
                          detail="evaluation identity")
            cert.count("evaluations")


def _compatibility_check(cert: Certificate, polys: dict, order: OrderType) -> None:
    for ij, poly in polys.items():
        for mono in compatibility_violations(poly, ij, order):
            cert.fail(index=ij, monomial=list(mono), order=str(order),
                      detail="leading monomial missing" if mono == ij else "monomial above degree")


def certify_P(params: SchemeParams, spectral: SpectralData | None = None,
              polys: dict | None = None) -> Certificate:
    cert = Certificate("ppoly", params)
    with timed(cert):
        spectral = spectral or SpectralData(params)
        polys = polys if polys is not None else construct_v(params)
        cert.merge(domain_compatible(params.domain, P_TYPE, params=params), "domain")
        missing = set(params.domain) - set(polys)
        for ij in sorted(missing):
            cert.fail(index=ij, detail="polynomial not constructed")
        _compatibility_check(cert, polys, P_TYPE)
        _evaluation_check(cert, polys, spectral.P, params.domain, spectral.point)
    return cert


def krein_support_route(spectral: SpectralData, order: OrderType = Q_TYPE) -> Certificate:
    """Conditions on ``q_{10,ij}^{mn}`` and ``q_{01,ij}^{mn}`` characterising Q-polynomiality."""
    params = spectral.params
    cert = Certificate("qpoly-krein-route", params)
    with timed(cert):
        dom = params.domain
        cert.merge(domain_compatible(dom, order, params=params), "domain")
        leq = lambda a, b: partial_leq(order, *a, *b)  # noqa: E731
        for gen, step in (((1, 0), (1, 0)), ((0, 1), (0, 1))):
            if gen not in dom:
                continue
            di, dj = step
            for i, j in dom:
                up = (i + di, j + dj)
                if up in dom:
                    if spectral.krein_parameter(gen, (i, j), up) == 0:
                        cert.fail(index=[gen, (i, j), up], detail="raising Krein parameter vanishes")
                    if spectral.krein_parameter(gen, up, (i, j)) == 0:
                        cert.fail(index=[gen, up, (i, j)], detail="lowering Krein parameter vanishes")
                for mn, val in spectral.krein(gen, (i, j)).items():
                    if val == 0:
                        continue
                    m, n = mn
                    if not (leq(mn, up) and leq((i, j), (m + di, n + dj))):
                        cert.fail(index=[gen, (i, j), mn], actual=val,
                                  detail="nonzero Krein parameter outside the allowed stencil")
                cert.count("rows")
    return cert


def polynomial_route(spectral: SpectralData, order: OrderType = Q_TYPE,
                     polys: dict | None = None) -> Certificate:
    params = spectral.params
    cert = Certificate("qpoly-polynomial-route", params)
    with timed(cert):
        cert.merge(domain_compatible(params.domain, order, params=params), "domain")
        polys = polys if polys is not None else construct_v_star(spectral, cert)
        for ij in params.domain:
            if ij not in polys:
                cert.fail(index=ij, detail="polynomial not constructed")
        _compatibility_check(cert, polys, order)
        _evaluation_check(cert, polys, spectral.Q, params.domain, spectral.dual_point)
    return cert


def certify_Q(spectral: SpectralData, polys: dict | None = None) -> Certificate:
    """Both characterisations must reach the same verdict."""
    cert = Certificate("qpoly", spectral.params)
    with timed(cert):
        krein = krein_support_route(spectral)
        poly = polynomial_route(spectral, polys=polys)
        if krein.passed != poly.passed:
            raise InvariantViolation(
                f"Q-polynomial routes disagree on {spectral.params.label()}: "
                f"krein={krein.verdict}, polynomial={poly.verdict}")
        cert.merge(krein, "krein-route")
        cert.merge(poly, "polynomial-route")
        cert.stats["krein-route-pass"] = int(krein.passed)
        cert.stats["polynomial-route-pass"] = int(poly.passed)
    return cert


# dual-eigenvalue recurrences with closed-form coefficients -------------------

def theta_star_coefficients(params: SchemeParams, i: int, j: int) -> dict[BiIndex, Fraction | None]:
    """Closed-form coefficients of ``theta* q_ij``; None where a denominator vanishes."""
    r, k, n = params.r, params.k, params.n

    def frac(num, den):
        return None if den == 0 else Fraction(num, den)

    return {
        (i, j): Fraction(n * (r - 3) * i, k),
        (i + 1, j): frac(n * (i + 1) * (k - i - j), k * (n - i - 2 * j)),
        (i + 1, j - 1): frac(n * (i + 1) * (n - k - j + 1), k * (n - i - 2 * j + 2)),
        (i - 1, j + 1): frac(n * (n - j - k) * (j + 1) * (r - 2), k * (n - i - 2 * j)),
        (i - 1, j): frac(n * (k - i - j + 1) * (n - i - j + 2) * (r - 2), k * (n - i - 2 * j + 2)),
    }


def mu_star_coefficients(params: SchemeParams, i: int, j: int) -> dict[BiIndex, Fraction | None]:
    k, n = params.k, params.n
    nk = k * (n - k)
    den_a = nk * (2 * j + i - n) * (2 * j + i - n + 1)
    den_b = nk * (2 * j + i - n - 2) * (2 * j + i - n)
    den_c = nk * (2 * j + i - n - 2) * (2 * j + i - n - 3)
    a = None if den_a == 0 else Fraction(
        (n - 1) * n * (j + k - n) * (i + j - k) * (j + 1), den_a)
    b = None if den_b == 0 else (n - 1) - Fraction(
        (n - 1) * n * (j * j * (n - i) - j * (n - i) * (n - i + 1) + (k - i) * (n - i + 2) * (n - k)),
        den_b)
    c = None if den_c == 0 else -Fraction(
        (n - 1) * n * (j + k - n - 1) * (i + j - k - 1) * (i + j - n - 2), den_c)
    return {(i, j + 1): a, (i, j): b, (i, j - 1): c}


def _recurrence_coefficients(cert: Certificate, params: SchemeParams, closed: dict,
                             krein: dict, where) -> dict[BiIndex, Fraction]:
    """Merge closed forms and Krein values; report disagreements and stray support."""
    coeffs = {}
    for t, val in closed.items():
        if not params.in_domain(*t):
            continue
        ref = krein[t]
        if val is None:
            cert.count("krein-fallbacks")
            coeffs[t] = ref
        else:
            cert.count("closed-form-coefficients")
            if val != ref:
                cert.fail(index=[where, t], expected=ref, actual=val,
                          detail="closed-form coefficient differs from Krein parameter")
            coeffs[t] = val
    for t, val in krein.items():
        if val and t not in coeffs:
            cert.fail(index=[where, t], actual=val, detail="Krein parameter outside the stencil")
    return coeffs


def dual_recurrence_check(spectral: SpectralData) -> Certificate:
    params = spectral.params
    cert = Certificate("dual-recurrences", params)
    with timed(cert):
        dom = params.domain
        for gen, closed_fn, value in (((1, 0), theta_star_coefficients, spectral.theta_star),
                                      ((0, 1), mu_star_coefficients, spectral.mu_star)):
            if gen not in dom:
                continue
            for ij in dom:
                coeffs = _recurrence_coefficients(cert, params, closed_fn(params, *ij),
                                                  spectral.krein(gen, ij), [gen, ij])
                for xy in dom:
                    lhs = value(xy) * spectral.Q[(ij, xy)]
                    rhs = sum((c * spectral.Q[(t, xy)] for t, c in coeffs.items()), Fraction(0))
                    if lhs != rhs:
                        cert.fail(index=[gen, ij, xy], expected=lhs, actual=rhs, detail="residual")
                    cert.count("residuals")
    return cert


def polys_json(polys: dict) -> list:
    return [{"index": list(ij), "terms": polys[ij].to_json()} for ij in sorted(polys)]
