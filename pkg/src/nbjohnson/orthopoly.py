"""Krawtchouk, Eberlein (dual Hahn) and Hahn polynomials, evaluated exactly.

Argument order follows ``K_i(x, N, p)``: degree first, then the point, the
size and the parameter.  Binomials use the falling-factorial convention, so
``binomial(a, b)`` is defined for negative ``a`` and vanishes for ``b < 0``.
Degrees below zero (``K_{-1}``, ``H_{-1}``) evaluate to 0.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .certificate import Certificate, timed


class PolynomialDomainError(ValueError):
    """The requested evaluation divides by zero."""


@lru_cache(maxsize=None)
def binomial(a: int, b: int) -> int:
    if b < 0:
        return 0
    if a >= 0 and b > a:
        return 0
    num = 1
    for t in range(b):
        num *= a - t
    return num // factorial(b)


@lru_cache(maxsize=None)
def krawtchouk(i: int, x: int, N: int, p: int) -> int:
    if i < 0:
        return 0
    return sum((-1) ** l * (p - 1) ** (i - l) * binomial(x, l) * binomial(N - x, i - l)
               for l in range(i + 1))


@lru_cache(maxsize=None)
def eberlein(i: int, x: int, N: int, p: int) -> int:
    if i < 0:
        return 0
    return sum((-1) ** l * binomial(x, l) * binomial(p - x, i - l) * binomial(N - p - x, i - l)
               for l in range(i + 1))


def eberlein_alt(i: int, x: int, N: int, p: int) -> int:
    """Second closed form of the Eberlein polynomial; agrees with :func:`eberlein`."""
    if i < 0:
        return 0
    return sum((-1) ** (i + l) * binomial(p - l, p - i) * binomial(p - x, l)
               * binomial(N - p - x + l, l)
               for l in range(i + 1))


@lru_cache(maxsize=None)
def hahn(i: int, x: int, N: int, p: int) -> Fraction:
    if i < 0:
        return Fraction(0)
    den = binomial(p, x) * binomial(N - p, x)
    if den == 0:
        raise PolynomialDomainError(f"Hahn denominator C(p,x)C(N-p,x) vanishes at x={x}, N={N}, p={p}")
    return Fraction(binomial(N, i) - binomial(N, i - 1), den) * eberlein(x, i, N, p)


def krawtchouk_recurrence_residual(i: int, x: int, N: int, p: int) -> int:
    lhs = p * x * krawtchouk(i, x, N, p)
    rhs = (-(i + 1) * krawtchouk(i + 1, x, N, p)
           + (i + (p - 1) * (N - i)) * krawtchouk(i, x, N, p)
           - (p - 1) * (N - i + 1) * krawtchouk(i - 1, x, N, p))
    return lhs - rhs


def hahn_recurrence_coeffs(r: int, N: int, p: int) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients ``(A_r, B_r, C_r)`` of ``-x H_r = A_r H_{r+1} + B_r H_r + C_r H_{r-1}``.

    Raises PolynomialDomainError when a denominator vanishes (a removable
    singularity of the closed form).
    """
    dens = (2 * r - N, N - 2 * r - 1, 2 * r - N - 2, N - 2 * r + 3)
    if 0 in dens:
        raise PolynomialDomainError(f"Hahn recurrence coefficient undefined at r={r}, N={N}")
    a = Fraction((r - N + p) * (p - r) * (r + 1), (2 * r - N) * (N - 2 * r - 1))
    b = -Fraction(r * r * N - r * N * (N + 1) + (2 + N) * (N - p) * p,
                  (2 * r - N - 2) * (2 * r - N))
    c = -Fraction((r - N - 1 + p) * (r - p - 1) * (N - r + 2),
                  (2 * r - N - 2) * (N - 2 * r + 3))
    return a, b, c


def hahn_recurrence_residual(r: int, x: int, N: int, p: int) -> Fraction:
    a, b, c = hahn_recurrence_coeffs(r, N, p)
    rhs = a * hahn(r + 1, x, N, p) + b * hahn(r, x, N, p)
    if c:
        rhs += c * hahn(r - 1, x, N, p)
    return -x * hahn(r, x, N, p) - rhs


def hahn_parameter_shift_residual(r: int, x: int, N: int, p: int) -> Fraction:
    """``H_r(x,N,p)`` minus its expansion in ``H_r, H_{r-1}`` at ``(N-1, p-1)``."""
    if p == 0 or N - 2 * r == 0 or N - 2 * r + 2 == 0:
        raise PolynomialDomainError(f"parameter shift undefined at r={r}, N={N}, p={p}")
    shifted = (Fraction(p - r, N - 2 * r) * hahn(r, x, N - 1, p - 1)
               + Fraction(N - p - r + 1, N - 2 * r + 2) * hahn(r - 1, x, N - 1, p - 1))
    return hahn(r, x, N, p) - Fraction(N, p) * shifted


# hypergeometric forms ------------------------------------------------------

def pochhammer(a, m: int):
    out = 1
    for t in range(m):
        out *= a + t
    return out


def terminating_hypergeometric(upper, lower, z) -> Fraction:
    """Sum of the pFq series; one upper parameter must be a non-positive integer."""
    terms = [-int(a) for a in upper if Fraction(a).denominator == 1 and a <= 0]
    if not terms:
        raise PolynomialDomainError("series does not terminate")
    z = Fraction(z)
    total = Fraction(0)
    for l in range(min(terms) + 1):
        den = pochhammer(Fraction(1), l)
        for b in lower:
            den *= pochhammer(Fraction(b), l)
        if den == 0:
            raise PolynomialDomainError(f"vanishing lower Pochhammer symbol at term {l}")
        num = Fraction(1)
        for a in upper:
            num *= pochhammer(Fraction(a), l)
        total += num / den * z**l
    return total


def krawtchouk_hat(i: int, x: int, q: Fraction, N: int) -> Fraction:
    """Classical Krawtchouk polynomial ``2F1(-i, -x; -N; 1/q)``."""
    return terminating_hypergeometric((-i, -x), (-N,), 1 / Fraction(q))


def hahn_q(i: int, x: int, alpha, beta, m: int) -> Fraction:
    """Classical Hahn polynomial ``3F2(-i, i+alpha+beta+1, -x; alpha+1, -m; 1)``."""
    return terminating_hypergeometric((-i, i + alpha + beta + 1, -x), (alpha + 1, -m), 1)


def dual_hahn_r(i: int, x: int, gamma, delta, m: int) -> Fraction:
    """Classical dual Hahn polynomial ``3F2(-i, -x, x+gamma+delta+1; gamma+1, -m; 1)``."""
    return terminating_hypergeometric((-i, -x, x + gamma + delta + 1), (gamma + 1, -m), 1)


def hypergeometric_bridge_residuals(i: int, x: int, N: int, p: int):
    """Residuals of the three rescalings tying K, H, E to the classical families."""
    mu = min(p, N - p)
    k_res = (krawtchouk(i, x, N, p)
             - binomial(N, i) * (p - 1) ** i * krawtchouk_hat(i, x, Fraction(p - 1, p), N))
    h_res = (hahn(i, x, N, p)
             - (binomial(N, i) - binomial(N, i - 1)) * hahn_q(i, x, mu - N - 1, -mu - 1, mu))
    e_res = (eberlein(i, x, N, p)
             - binomial(p, i) * binomial(N - p, i) * dual_hahn_r(i, x, mu - N - 1, -mu - 1, mu))
    return Fraction(k_res), Fraction(h_res), Fraction(e_res)


FAMILIES = {
    "krawtchouk": krawtchouk,
    "eberlein": eberlein,
    "hahn": hahn,
}


def evaluate(family: str, i: int, x: int, N: int, p: int) -> Fraction:
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}") from None
    return Fraction(fn(i, x, N, p))


def orthopoly_suite(max_n: int = 10) -> Certificate:
    """Every polynomial identity above, exhaustively for ``N <= max_n``.

    Points where a closed form divides by zero are counted under
    ``undefined`` and skipped; everything else must give a zero residual.
    """
    cert = Certificate("orthopoly")
    with timed(cert):
        for N in range(max_n + 1):
            for p in range(N + 1):
                mu = min(p, N - p)
                for i in range(mu + 1):
                    for x in range(mu + 1):
                        cert.expect_equal(["eberlein-forms", i, x, N, p], eberlein(i, x, N, p),
                                          eberlein_alt(i, x, N, p))
                        cert.count("eberlein-forms")
                        _checked(cert, "bridges", (i, x, N, p),
                                 lambda: hypergeometric_bridge_residuals(i, x, N, p))
                        _checked(cert, "hahn-recurrence", (i, x, N, p),
                                 lambda: hahn_recurrence_residual(i, x, N, p))
                for r in range(p + 1):
                    for x in range(mu + 1):
                        _checked(cert, "parameter-shift", (r, x, N, p),
                                 lambda: hahn_parameter_shift_residual(r, x, N, p))
            for p in range(1, max_n + 1):
                for i in range(N + 1):
                    for x in range(N + 1):
                        cert.expect_equal(["krawtchouk-recurrence", i, x, N, p], 0,
                                          krawtchouk_recurrence_residual(i, x, N, p))
                        cert.count("krawtchouk-recurrence")
    return cert


def _checked(cert: Certificate, name: str, point, residual) -> None:
    try:
        values = residual()
    except (PolynomialDomainError, ZeroDivisionError):
        cert.count(f"{name}.undefined")
        return
    values = values if isinstance(values, tuple) else (values,)
    for part, val in enumerate(values):
        if val:
            cert.fail(index=[name, *point], expected=0, actual=val, part=part)
    cert.count(name)
