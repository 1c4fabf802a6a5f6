"""Dual adjacency matrices with respect to a base vertex and the subconstituent algebra."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bispectral import build_quadruple, operator_matrix, relation_residuals
from .certificate import Certificate, InvariantViolation, timed
from .exact import BinaryMatrix, ExactMatrix, anticommutator, commutator, mat_mul
from .scheme import AdjacencyFamily, BiIndex, SchemeParams, a01_expansion, a10_expansion
from .spectra import SpectralData

X10, X01 = (1, 0), (0, 1)


@dataclass(frozen=True)
class DualPair:
    base: int
    classes: tuple[BiIndex, ...]  # relation between the base vertex and each vertex
    dual_adjacency: dict          # BiIndex -> diagonal ExactMatrix
    dual_idempotents: dict        # BiIndex -> diagonal BinaryMatrix


def default_bases(v: int, count: int = 3) -> list[int]:
    """First, middle and last vertex (or ``count`` evenly spread ones)."""
    if count <= 0:
        raise ValueError("at least one base vertex required")
    if count == 1 or v == 1:
        return [0]
    picks = np.linspace(0, v - 1, min(count, v)).round().astype(int)
    return sorted({int(t) for t in picks})


def build_duals(fam: AdjacencyFamily, spectral: SpectralData, base: int) -> DualPair:
    if not 0 <= base < fam.v:
        raise ValueError(f"base vertex {base} out of range 0..{fam.v - 1}")
    dom = spectral.domain
    pos = {ij: a for a, ij in enumerate(dom)}
    label = np.zeros(fam.v, dtype=np.int64)
    for ij in dom:
        label[fam.ints(ij)[base].astype(bool)] = pos[ij]
    classes = tuple(dom[t] for t in label)
    dual_adj = {mn: ExactMatrix.diagonal([spectral.Q[(mn, c)] for c in classes]) for mn in dom}
    dual_idem = {ij: BinaryMatrix(np.diag(fam.ints(ij)[base].astype(bool))) for ij in dom}
    return DualPair(base, classes, dual_adj, dual_idem)


def dual_check(fam: AdjacencyFamily, spectral: SpectralData, duals: DualPair, idem: dict) -> Certificate:
    """Invariants of one dual pair: partition, entries, Krein products, both expansions."""
    cert = Certificate("dual-bases", fam.params)
    with timed(cert):
        dom, v = spectral.domain, fam.v
        estar = {ij: duals.dual_idempotents[ij].to_exact() for ij in dom}
        total = sum((e.numerators for e in estar.values()), np.zeros((v, v), dtype=np.int64))
        if not np.array_equal(total, np.eye(v, dtype=np.int64)):
            cert.fail(detail="dual idempotents do not sum to the identity")
        unit = np.zeros((v, v), dtype=np.int64)
        unit[duals.base, duals.base] = 1
        if not np.array_equal(estar[(0, 0)].numerators, unit):
            cert.fail(index=(0, 0), detail="E*_00 is not the unit at the base vertex")
        for mn in dom:
            expected = ExactMatrix.diagonal(idem[mn][duals.base, y] * v for y in range(v))
            cert.expect_equal(mn, True, duals.dual_adjacency[mn] == expected,
                              detail="A* entries differ from v E[base, :]")
        for a, ij in enumerate(dom):
            for kl in dom[a:]:
                lhs = mat_mul(duals.dual_adjacency[ij], duals.dual_adjacency[kl])
                rhs = ExactMatrix.zeros(v)
                for mn, q in spectral.krein(ij, kl).items():
                    if q:
                        rhs = rhs + duals.dual_adjacency[mn].scale(q)
                diff = lhs.first_difference(rhs)
                if diff:
                    cert.fail(index=[ij, kl], expected=diff[3], actual=diff[2], entry=diff[:2],
                              detail="A* products against Krein parameters")
                cert.count("dual-products")
        for mn in dom:
            acc = ExactMatrix.zeros(v)
            for ij in dom:
                acc = acc + estar[ij].scale(spectral.Q[(mn, ij)])
            cert.expect_equal(mn, True, acc == duals.dual_adjacency[mn],
                              detail="A* != sum q E*")
        for ij in dom:
            acc = ExactMatrix.zeros(v)
            for mn in dom:
                acc = acc + duals.dual_adjacency[mn].scale(spectral.P[(ij, mn)])
            cert.expect_equal(ij, True, acc.scale(Fraction(1, v)) == estar[ij],
                              detail="E* != (1/v) sum p A*")
    return cert


def triple_product_check(fam: AdjacencyFamily, spectral: SpectralData, duals: DualPair,
                         idem: dict) -> Certificate:
    """Vanishing of E*AE* and EA*E against intersection numbers and Krein parameters."""
    cert = Certificate("triple-products", fam.params)
    with timed(cert):
        dom = spectral.domain
        masks = {ij: duals.dual_idempotents[ij].to_bool().diagonal() for ij in dom}
        for ij in dom:
            for mn in dom:
                sub = fam.ints(mn)[masks[ij]]
                for rs in dom:
                    vanishes = not sub[:, masks[rs]].any()
                    p_zero = spectral.intersection(ij, mn)[rs] == 0
                    if vanishes != p_zero:
                        cert.fail(index=[ij, mn, rs], expected=p_zero, actual=vanishes,
                                  detail="E*AE* vanishing disagrees with intersection number")
                    cert.count("E*AE*")
        for ij in dom:
            E = idem[ij]
            for mn in dom:
                # E_ij A*_mn: scale the columns by the diagonal of A*_mn
                d = duals.dual_adjacency[mn]
                left = _scale_columns(E, d)
                for rs in dom:
                    vanishes = mat_mul(left, idem[rs]).is_zero()
                    q_zero = spectral.krein(ij, mn)[rs] == 0
                    if vanishes != q_zero:
                        cert.fail(index=[ij, mn, rs], expected=q_zero, actual=vanishes,
                                  detail="EA*E vanishing disagrees with Krein parameter")
                    cert.count("EA*E")
    return cert


def _scale_columns(m: ExactMatrix, diag: ExactMatrix) -> ExactMatrix:
    col = diag.numerators.diagonal()
    bound = int(np.abs(m.numerators).max(initial=0)) * int(np.abs(col).max(initial=0))
    dtype = object if bound >= 2**62 else np.int64
    num = m.numerators.astype(dtype) * col.astype(dtype)[None, :]
    return ExactMatrix(num, m.denominator * diag.denominator)


# subconstituent relations ---------------------------------------------------------

def _nested(a: ExactMatrix, b: ExactMatrix, depth: int = 3) -> ExactMatrix:
    out = b
    for _ in range(depth):
        out = commutator(a, out)
    return out


def subconstituent_residuals(params: SchemeParams, A10, A01, S10, S01) -> dict:
    """LHS - RHS of the five relations; entries are None where a relation is out of reach.

    A relation is out of reach when a generator it mentions is absent from the
    domain, or when it needs the Q-polynomial structure (n < 2k - 1).
    """
    r, k, n = params.r, params.k, params.n
    has_x, has_y = A10 is not None, A01 is not None
    qpoly = params.q_polynomial_range
    out: dict[str, ExactMatrix | None] = dict.fromkeys(
        ("[A*01,A10]", "dolan-grady-dual", "dolan-grady", "tridiagonal-dual", "tridiagonal-c1c2"))
    if has_x and has_y:
        out["[A*01,A10]"] = commutator(S01, A10)
    if has_x:
        out["dolan-grady-dual"] = (_nested(S10, A10)
                                   - commutator(S10, A10).scale(Fraction(n * (r - 1), k) ** 2))
        if qpoly:
            out["dolan-grady"] = _nested(A10, S10) - commutator(A10, S10).scale((r - 1) ** 2)
    if has_y:
        out["tridiagonal-dual"] = (_nested(S01, A01)
                                   - commutator(S01, A01).scale(Fraction(n * (n - 1), k * (n - k)) ** 2))
        if qpoly and has_x:
            c1 = n * (n + 2) * (r - 1) ** 2 + k * k * r * r - 2 * k * (r - 1) * (r * (n + 1) - 2)
            c2 = 2 * (k * r - (n - 1) * (r - 1))
            A01sq = mat_mul(A01, A01)
            coeff = A10.scale(c2) + mat_mul(A10, A10)
            inner = (mat_mul(mat_mul(A01, S01), A01).scale(2)
                     - anticommutator(A01sq, S01)
                     + anticommutator(A01, S01).scale(2 * (r - 1))
                     + mat_mul(coeff.shift(c1), S01))
            out["tridiagonal-c1c2"] = commutator(A01, inner)
    return out


def _report(cert: Certificate, residuals: dict, labels=None, where=None) -> None:
    for name, res in residuals.items():
        if res is None:
            cert.count("relations-not-applicable")
            continue
        hit = res.first_nonzero()
        if hit:
            i, j, val = hit
            entry = [labels[i], labels[j]] if labels else [i, j]
            cert.fail(index=entry, expected=0, actual=val, relation=name,
                      **({"base": where} if where is not None else {}))
        cert.count("relations")


def _generators(fam: AdjacencyFamily, duals: DualPair):
    def get(ij, source):
        return source(ij) if fam.params.in_domain(*ij) else None
    return (get(X10, fam.exact), get(X01, fam.exact),
            get(X10, duals.dual_adjacency.get), get(X01, duals.dual_adjacency.get))


def subconstituent_relations_check(fam: AdjacencyFamily, duals: DualPair) -> Certificate:
    cert = Certificate("subconstituent-relations", fam.params)
    with timed(cert):
        _report(cert, subconstituent_residuals(fam.params, *_generators(fam, duals)), where=duals.base)
    return cert


# primary module -----------------------------------------------------------------

def primary_coordinates(fam: AdjacencyFamily, duals: DualPair, vec) -> list[Fraction]:
    """Coordinates of a vertex-space vector in the basis ``A_ij x̂``; raises if outside the span."""
    dom = fam.domain
    coords = []
    recon = [Fraction(0)] * fam.v
    for ij in dom:
        support = [y for y, c in enumerate(duals.classes) if c == ij]
        c = Fraction(sum(vec[y] for y in support), len(support))
        coords.append(c)
        for y in support:
            recon[y] = c
    if recon != [Fraction(t) for t in vec]:
        raise InvariantViolation("vector does not lie in the primary module")
    return coords


def primary_representation(fam: AdjacencyFamily, duals: DualPair, M: ExactMatrix) -> ExactMatrix:
    """|D| x |D| matrix of ``M`` restricted to the span of ``A_ij x̂``."""
    dom = fam.domain
    cols = []
    for ij in dom:
        basis_vec = fam.ints(ij)[:, duals.base]
        num = M.numerators[:, basis_vec.astype(bool)].sum(axis=1)
        image = [Fraction(int(t), M.denominator) for t in num]
        cols.append(primary_coordinates(fam, duals, image))
    return ExactMatrix.from_rows([[cols[s][t] for s in range(len(dom))] for t in range(len(dom))])


def primary_module_check(fam: AdjacencyFamily, spectral: SpectralData, duals: DualPair) -> Certificate:
    params = spectral.params
    r, k, n = params.r, params.k, params.n
    cert = Certificate("primary-module", params)
    with timed(cert):
        dom = spectral.domain
        basis = np.stack([fam.ints(ij)[:, duals.base] for ij in dom])
        if np.linalg.matrix_rank(basis.astype(np.float64)) != len(dom) or (basis.sum(axis=0) != 1).any():
            raise InvariantViolation("the vectors A_ij x̂ do not form a basis")
        gens = _generators(fam, duals)
        reps = [None if g is None else primary_representation(fam, duals, g) for g in gens]
        R10, R01, S10, S01 = reps
        quad = build_quadruple(params)
        if R10 is not None:
            cert.expect_equal("A10", True, R10 == operator_matrix(params, a10_expansion),
                              detail="A10 differs from its recurrence operator")
            cert.expect_equal("X", True, R10.shift(-k * (r - 2)) == quad.X, detail="X = A10 - k(r-2)")
        if R01 is not None:
            cert.expect_equal("A01", True, R01 == operator_matrix(params, a01_expansion),
                              detail="A01 differs from its recurrence operator")
            cert.expect_equal("Y", True, R01 == quad.Y, detail="Y = A01")
        if S10 is not None:
            cert.expect_equal("A*10", True,
                              S10 == ExactMatrix.diagonal(spectral.theta_star(ij) for ij in dom),
                              detail="A*10 not diagonal with theta*")
        if S01 is not None:
            cert.expect_equal("A*01", True,
                              S01 == ExactMatrix.diagonal(spectral.mu_star(ij) for ij in dom),
                              detail="A*01 not diagonal with mu*")
            ystar = S01.scale(Fraction(-1, n - 1)).shift(1).scale(Fraction(k * (n - k), n))
            cert.expect_equal("Y*", True, ystar == quad.Ystar, detail="Y* correspondence")
            if S10 is not None:
                inner = S01.scale(Fraction(n - k, n - 1)).shift(k)
                xstar = (inner.scale(Fraction(k * (r - 2), n * (r - 1)))
                         - S10.scale(Fraction(k, n * (r - 1))))
                cert.expect_equal("X*", True, xstar == quad.Xstar, detail="X* correspondence")
        cert.count("correspondences")
        # the module carries the same subconstituent relations
        sub = Certificate("module-relations", params)
        _report(sub, subconstituent_residuals(params, *reps), labels=list(dom))
        cert.merge(sub, "module")
    return cert


def raw_generator_residuals(fam: AdjacencyFamily, duals: DualPair) -> dict:
    """Residuals of the bispectral relations with A10, A01, A*10, A*01 substituted for X, Y, X*, Y*."""
    A10, A01, S10, S01 = _generators(fam, duals)
    if None in (A10, A01, S10, S01):
        return {}
    return relation_residuals(fam.params, A10, A01, S10, S01)


def raw_generator_check(fam: AdjacencyFamily, duals: DualPair) -> Certificate:
    """Passes when at least one gl2 or Hahn-algebra relation FAILS for the raw generators."""
    cert = Certificate("raw-generators-differ", fam.params)
    with timed(cert):
        res = raw_generator_residuals(fam, duals)
        if not res:
            return cert.skip("a generator is absent from the domain")
        nonzero = [name for name in ("gl2-1", "gl2-2", "hahn-1", "hahn-2") if not res[name].is_zero()]
        cert.count("nonzero-residuals", len(nonzero))
        if not nonzero:
            cert.fail(detail="every gl2/Hahn relation holds for the raw generators")
        for name in nonzero:
            cert.count(f"nonzero.{name}")
    return cert


def terwilliger_check(fam: AdjacencyFamily, spectral: SpectralData, idem: dict,
                      bases: list[int] | None = None) -> Certificate:
    """All subconstituent-algebra checks for each base vertex, merged into one certificate."""
    cert = Certificate("terwilliger", fam.params)
    with timed(cert):
        for base in bases if bases is not None else default_bases(fam.v):
            duals = build_duals(fam, spectral, base)
            for part in (dual_check(fam, spectral, duals, idem),
                         triple_product_check(fam, spectral, duals, idem),
                         subconstituent_relations_check(fam, duals),
                         primary_module_check(fam, spectral, duals),
                         raw_generator_check(fam, duals)):
                if part.verdict != "skipped":
                    cert.merge(part, f"{part.check}@{base}")
            cert.count("bases")
    return cert
