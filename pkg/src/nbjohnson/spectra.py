"""Eigenvalue tables, idempotents, Krein parameters and intersection numbers.

Tables are keyed by pairs of domain indices.  ``P[(ij, xy)]`` is the eigenvalue
of ``A_ij`` on ``E_xy`` and ``Q[(ij, xy)]`` the coefficient of ``A_xy`` in
``v * E_ij``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property

import numpy as np

from .certificate import Certificate, timed
from .exact import ExactMatrix, hadamard, inverse, mat_mul
from .orthopoly import binomial, eberlein, hahn, krawtchouk
from .scheme import AdjacencyFamily, BiIndex, SchemeParams, intersection_numbers


def eigenvalue_p(params: SchemeParams, i: int, j: int, x: int, y: int) -> Fraction:
    r, k, n = params.r, params.k, params.n
    return Fraction((r - 1) ** j * krawtchouk(i, x, k - j, r - 1) * eberlein(j, y, n - x, k - x))


def dual_eigenvalue_q(params: SchemeParams, i: int, j: int, x: int, y: int) -> Fraction:
    r, k, n = params.r, params.k, params.n
    kraw = krawtchouk(i, x, k - y, r - 1)
    if kraw == 0:
        # i > k - y: the Hahn factor (a polynomial in y) is finite but its
        # ratio-of-binomials form is 0/0 there
        return Fraction(0)
    return Fraction(binomial(n, i), binomial(k, i)) * kraw * hahn(j, y, n - i, k - i)


def multiplicity(params: SchemeParams, x: int, y: int) -> Fraction:
    r, n = params.r, params.n
    return Fraction((r - 2) ** x * binomial(n, x)
                    * (binomial(n - x, y) - binomial(n - x, y - 1)))


def theta(params: SchemeParams, x: int, y: int) -> Fraction:
    return Fraction(params.k * (params.r - 2) - x * (params.r - 1))


def mu(params: SchemeParams, x: int, y: int) -> Fraction:
    r, k, n = params.r, params.k, params.n
    return Fraction((r - 1) * ((k - x - y) * (n - k - y) - y))


def theta_star(params: SchemeParams, x: int, y: int) -> Fraction:
    r, k, n = params.r, params.k, params.n
    return Fraction(n, k) * ((r - 2) * (k - y) - x * (r - 1))


def mu_star(params: SchemeParams, x: int, y: int) -> Fraction:
    k, n = params.k, params.n
    return (n - 1) * (1 - Fraction(n * y, k * (n - k)))


def _solve_structure(table_inv, table, domain, ij, kl) -> dict[BiIndex, Fraction]:
    # f_ij(ab) f_kl(ab) = sum_mn c^mn f_mn(ab) for every ab
    rhs = [table[(ij, ab)] * table[(kl, ab)] for ab in domain]
    return {mn: sum((c * b for c, b in zip(row, rhs)), Fraction(0))
            for mn, row in zip(domain, table_inv)}


class SpectralData:
    """Exact P/Q tables of one instance and everything derived from them."""

    def __init__(self, params: SchemeParams):
        self.params = params
        self.domain = params.domain
        dom = self.domain
        self.P = {(ij, xy): eigenvalue_p(params, *ij, *xy) for ij in dom for xy in dom}
        self.Q = {(ij, xy): dual_eigenvalue_q(params, *ij, *xy) for ij in dom for xy in dom}
        self.valencies = {ij: self.P[(ij, (0, 0))] for ij in dom}
        self.multiplicities = {xy: multiplicity(params, *xy) for xy in dom}

    @property
    def v(self) -> int:
        return self.params.v

    @cached_property
    def _q_inverse(self):
        # rows indexed by the unknown label mn, columns by the relation ab
        return inverse([[self.Q[(mn, ab)] for mn in self.domain] for ab in self.domain])

    @cached_property
    def _p_inverse(self):
        return inverse([[self.P[(mn, ab)] for mn in self.domain] for ab in self.domain])

    @cached_property
    def _krein(self) -> dict:
        return {(ij, kl): _solve_structure(self._q_inverse, self.Q, self.domain, ij, kl)
                for ij in self.domain for kl in self.domain}

    @cached_property
    def _intersections(self) -> dict:
        return {(ij, kl): _solve_structure(self._p_inverse, self.P, self.domain, ij, kl)
                for ij in self.domain for kl in self.domain}

    def krein(self, ij: BiIndex, kl: BiIndex) -> dict[BiIndex, Fraction]:
        """``q_{ij,kl}^{mn}`` for every ``mn``."""
        return self._krein[(ij, kl)]

    def krein_parameter(self, ij: BiIndex, kl: BiIndex, mn: BiIndex) -> Fraction:
        return self._krein[(ij, kl)][mn]

    def intersection(self, ij: BiIndex, kl: BiIndex) -> dict[BiIndex, Fraction]:
        """``p_{ij,kl}^{mn}`` from the eigenvalue table."""
        return self._intersections[(ij, kl)]

    def theta(self, xy): return theta(self.params, *xy)
    def mu(self, xy): return mu(self.params, *xy)
    def theta_star(self, xy): return theta_star(self.params, *xy)
    def mu_star(self, xy): return mu_star(self.params, *xy)

    def point(self, xy) -> tuple[Fraction, Fraction]:
        """``(theta_xy, mu_xy)``: where ``v_ij`` is evaluated."""
        return self.theta(xy), self.mu(xy)

    def dual_point(self, xy) -> tuple[Fraction, Fraction]:
        """``(theta*_xy, mu*_xy)``; a coordinate is 0 when its generator is absent (k = 0 or k = n)."""
        has_x = (1, 0) in self.domain
        has_y = (0, 1) in self.domain
        return (self.theta_star(xy) if has_x else Fraction(0),
                self.mu_star(xy) if has_y else Fraction(0))

    def tables_json(self) -> dict:
        dom = self.domain

        def table(t):
            return [{"index": list(ij), "at": list(xy), "value": str(t[(ij, xy)])}
                    for ij in dom for xy in dom]

        krein = [{"ij": list(ij), "kl": list(kl), "mn": list(mn), "value": str(val)}
                 for ij in dom for kl in dom for mn, val in self.krein(ij, kl).items() if val]
        return {
            "P": table(self.P),
            "Q": table(self.Q),
            "valencies": [{"index": list(ij), "value": str(self.valencies[ij])} for ij in dom],
            "multiplicities": [{"index": list(xy), "value": str(self.multiplicities[xy])}
                               for xy in dom],
            "krein": krein,
        }


def spectral_data(params: SchemeParams) -> SpectralData:
    return SpectralData(params)


def build_idempotents(fam: AdjacencyFamily, spectral: SpectralData) -> dict[BiIndex, ExactMatrix]:
    v = fam.v
    out = {}
    for mn in spectral.domain:
        coeffs = {ab: spectral.Q[(mn, ab)] for ab in spectral.domain}
        lcm = math.lcm(*(c.denominator for c in coeffs.values()))
        big = max(abs(c.numerator) * (lcm // c.denominator) for c in coeffs.values()) >= 2**62
        # supports of the A_ab are disjoint, so no entry accumulates
        num = np.zeros((v, v), dtype=object if big else np.int64)
        for ab, c in coeffs.items():
            if c:
                num = num + int(c * lcm) * fam.ints(ab)
        out[mn] = ExactMatrix(num, v * lcm)
    return out


def idempotent_check(fam: AdjacencyFamily, spectral: SpectralData, idem=None) -> Certificate:
    """Orthogonality, completeness, ranks, E_00 and the spectral decomposition."""
    cert = Certificate("idempotents", fam.params)
    with timed(cert):
        idem = idem if idem is not None else build_idempotents(fam, spectral)
        dom = spectral.domain
        v = fam.v
        ones = ExactMatrix.ones(v).scale(Fraction(1, v))
        if idem[(0, 0)] != ones:
            cert.fail(index=(0, 0), detail="E_00 differs from J/v")
        total = ExactMatrix.zeros(v)
        for mn in dom:
            E = idem[mn]
            total = total + E
            if not E.is_symmetric():
                cert.fail(index=mn, detail="idempotent not symmetric")
            cert.expect_equal(mn, spectral.multiplicities[mn], E.trace(), detail="rank")
        if total != ExactMatrix.identity(v):
            cert.fail(detail="idempotents do not sum to the identity")
        for a, mn in enumerate(dom):
            for pq in dom[a:]:
                prod = mat_mul(idem[mn], idem[pq])
                target = idem[mn] if mn == pq else ExactMatrix.zeros(v)
                diff = prod.first_difference(target)
                if diff:
                    cert.fail(index=[mn, pq], expected=diff[3], actual=diff[2], entry=diff[:2])
                cert.count("products")
        for ij in dom:
            acc = ExactMatrix.zeros(v)
            for mn in dom:
                acc = acc + idem[mn].scale(spectral.P[(ij, mn)])
            diff = acc.first_difference(fam.exact(ij))
            if diff:
                cert.fail(index=ij, expected=diff[3], actual=diff[2], entry=diff[:2],
                          detail="spectral decomposition")
    return cert


def wilson_duality_check(spectral: SpectralData) -> Certificate:
    cert = Certificate("wilson-duality", spectral.params)
    with timed(cert):
        for ij in spectral.domain:
            for mn in spectral.domain:
                lhs = spectral.Q[(mn, ij)] / spectral.multiplicities[mn]
                rhs = spectral.P[(ij, mn)] / spectral.valencies[ij]
                cert.expect_equal([ij, mn], rhs, lhs)
                cert.count("pairs")
    return cert


def multiplicity_check(spectral: SpectralData) -> Certificate:
    cert = Certificate("multiplicities", spectral.params)
    with timed(cert):
        for xy in spectral.domain:
            cert.expect_equal(xy, spectral.Q[(xy, (0, 0))], spectral.multiplicities[xy])
        cert.expect_equal("sum", spectral.v, sum(spectral.multiplicities.values()))
        cert.expect_equal("valency-sum", spectral.v, sum(spectral.valencies.values()))
    return cert


def intersection_agreement_check(fam: AdjacencyFamily, spectral: SpectralData) -> Certificate:
    """Combinatorial counts against the spectral solution, plus double counting."""
    cert = Certificate("intersection-numbers", fam.params)
    with timed(cert):
        dom = spectral.domain
        for ij in dom:
            for kl in dom:
                comb = intersection_numbers(fam, ij, kl)
                spec_route = spectral.intersection(ij, kl)
                for mn in dom:
                    cert.expect_equal([ij, kl, mn], Fraction(comb[mn]), spec_route[mn])
                weighted = sum(comb[mn] * spectral.valencies[mn] for mn in dom)
                cert.expect_equal([ij, kl], spectral.valencies[ij] * spectral.valencies[kl], weighted,
                                  detail="double counting")
                cert.count("pairs")
    return cert


def krein_check(spectral: SpectralData, fam: AdjacencyFamily | None = None, idem=None) -> Certificate:
    """Nonnegativity; with a family, also E_ij o E_kl against the Krein expansion."""
    cert = Certificate("krein", spectral.params)
    with timed(cert):
        dom = spectral.domain
        for ij in dom:
            for kl in dom:
                for mn, val in spectral.krein(ij, kl).items():
                    if val < 0:
                        cert.fail(index=[ij, kl, mn], actual=val, detail="negative Krein parameter")
        if fam is not None:
            idem = idem if idem is not None else build_idempotents(fam, spectral)
            v = fam.v
            for a, ij in enumerate(dom):
                for kl in dom[a:]:
                    lhs = hadamard(idem[ij], idem[kl])
                    rhs = ExactMatrix.zeros(v)
                    for mn, val in spectral.krein(ij, kl).items():
                        if val:
                            rhs = rhs + idem[mn].scale(val / v)
                    diff = lhs.first_difference(rhs)
                    if diff:
                        cert.fail(index=[ij, kl], expected=diff[3], actual=diff[2], entry=diff[:2])
                    cert.count("hadamard-products")
    return cert
