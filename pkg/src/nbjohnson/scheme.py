"""The non-binary Johnson scheme J_r(k, n): vertices, relations, adjacency matrices.

A vertex is a length-``n`` word over ``{0, ..., r-1}`` with exactly ``k``
non-zero letters.  Two vertices are in relation ``R_ij`` when they agree on
``k - i - j`` non-zero positions and share ``k - j`` non-zero positions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import numpy as np

from .certificate import Certificate, InvariantViolation, timed
from .exact import BinaryMatrix, ExactMatrix, int_matmul

DEFAULT_MAX_VERTICES = 5000

BiIndex = tuple[int, int]


class ResourceLimitError(RuntimeError):
    """The requested instance exceeds the configured size guard."""


@dataclass(frozen=True)
class SchemeParams:
    r: int
    k: int
    n: int

    def __post_init__(self):
        if self.r < 3:
            raise ValueError(f"r >= 3 required (got r={self.r})")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"0 <= k <= n required (got k={self.k}, n={self.n})")

    @property
    def v(self) -> int:
        return comb(self.n, self.k) * (self.r - 1) ** self.k

    @property
    def jmax(self) -> int:
        return min(self.k, self.n - self.k)

    @cached_property
    def domain(self) -> tuple[BiIndex, ...]:
        """The index set shared by relations and idempotents, sorted."""
        return tuple((a, b) for a in range(self.k + 1) for b in range(self.jmax + 1)
                     if a + b <= self.k)

    def in_domain(self, i: int, j: int) -> bool:
        return i >= 0 and 0 <= j <= self.jmax and i + j <= self.k

    @property
    def q_polynomial_range(self) -> bool:
        return self.n >= 2 * self.k - 1

    def label(self) -> str:
        return f"J_{self.r}({self.k},{self.n})"


def enumerate_vertices(params: SchemeParams, max_vertices: int = DEFAULT_MAX_VERTICES):
    if params.v > max_vertices:
        raise ResourceLimitError(
            f"{params.label()} has {params.v} vertices, above the guard of {max_vertices}")
    words = []
    for support in itertools.combinations(range(params.n), params.k):
        for letters in itertools.product(range(1, params.r), repeat=params.k):
            w = [0] * params.n
            for pos, a in zip(support, letters):
                w[pos] = a
            words.append(tuple(w))
    words.sort()
    return words


def pair_statistics(x, y) -> tuple[int, int]:
    if len(x) != len(y):
        raise ValueError("vertices of different lengths")
    e = sum(1 for a, b in zip(x, y) if a == b != 0)
    c = sum(1 for a, b in zip(x, y) if a != 0 and b != 0)
    return e, c


def classify_pair(params: SchemeParams, x, y) -> BiIndex:
    e, c = pair_statistics(x, y)
    i, j = c - e, params.k - c
    if not params.in_domain(i, j):
        raise InvariantViolation(f"pair {x}, {y} classified outside the domain as {(i, j)}")
    return i, j


# recurrences for A_10 A_ij and A_01 A_ij, out-of-domain targets dropped

def a10_expansion(params: SchemeParams, i: int, j: int) -> dict[BiIndex, int]:
    r, k = params.r, params.k
    terms = {
        (i - 1, j): (k - i - j + 1) * (r - 2),
        (i, j): i * (r - 3) + j * (r - 2),
        (i + 1, j): i + 1,
    }
    return {t: c for t, c in terms.items() if params.in_domain(*t)}


def a01_expansion(params: SchemeParams, i: int, j: int) -> dict[BiIndex, int]:
    r, k, n = params.r, params.k, params.n
    terms = {
        (i - 1, j): (k - i - j + 1) * (r - 2) * j,
        (i, j - 1): (k - i - j + 1) * (n - k - j + 1) * (r - 1),
        (i + 1, j): (i + 1) * j,
        (i, j + 1): (j + 1) ** 2,
        (i + 1, j - 1): (i + 1) * (n - k - j + 1) * (r - 1),
        (i - 1, j + 1): (j + 1) ** 2 * (r - 2),
        (i, j): j * (k - i - j + (r - 2) * i + (n - k - j) * (r - 1)),
    }
    return {t: c for t, c in terms.items() if params.in_domain(*t)}


@dataclass(frozen=True)
class AdjacencyFamily:
    params: SchemeParams
    vertices: tuple
    matrices: dict = field(repr=False)

    @property
    def v(self) -> int:
        return len(self.vertices)

    @property
    def domain(self) -> tuple[BiIndex, ...]:
        return self.params.domain

    @cached_property
    def _int_cache(self) -> dict:
        return {}

    def ints(self, ij: BiIndex) -> np.ndarray:
        """0/1 int64 array of ``A_ij``; cached, read-only."""
        cache = self._int_cache
        if ij not in cache:
            arr = self.matrices[ij].to_int()
            arr.flags.writeable = False
            cache[ij] = arr
        return cache[ij]

    def exact(self, ij: BiIndex) -> ExactMatrix:
        return ExactMatrix(self.ints(ij))

    def index_of(self, vertex) -> int:
        try:
            return self.vertices.index(tuple(vertex))
        except ValueError:
            raise ValueError(f"{vertex} is not a vertex of {self.params.label()}") from None

    def class_of(self, a: int, b: int) -> BiIndex:
        for ij in self.domain:
            if self.ints(ij)[a, b]:
                return ij
        raise InvariantViolation(f"pair ({a}, {b}) lies in no relation")

    def with_matrices(self, matrices: dict) -> "AdjacencyFamily":
        return AdjacencyFamily(self.params, self.vertices, dict(matrices))


def relation_labels(params: SchemeParams, vertices) -> np.ndarray:
    """v x v array holding the position in ``params.domain`` of each pair's relation."""
    V = np.array(vertices, dtype=np.int16)
    nz = V != 0
    c = int_matmul(nz.astype(np.int64), nz.T.astype(np.int64))
    e = np.zeros_like(c)
    for pos in range(params.n):
        col = V[:, pos]
        e += (col[:, None] == col[None, :]) & nz[:, pos][:, None]
    i = c - e
    j = params.k - c
    lookup = np.full((params.k + 1, params.k + 1), -1, dtype=np.int64)
    for idx, (a, b) in enumerate(params.domain):
        lookup[a, b] = idx
    ok = (i >= 0) & (j >= 0) & (i <= params.k) & (j <= params.k)
    if not ok.all():
        raise InvariantViolation("relation statistics out of range")
    labels = lookup[i, j]
    if (labels < 0).any():
        a, b = (int(t) for t in np.argwhere(labels < 0)[0])
        raise InvariantViolation(f"pair ({a}, {b}) classified outside the domain")
    return labels


def build_adjacency(params: SchemeParams, max_vertices: int = DEFAULT_MAX_VERTICES) -> AdjacencyFamily:
    vertices = enumerate_vertices(params, max_vertices)
    labels = relation_labels(params, vertices)
    mats = {ij: BinaryMatrix(labels == idx) for idx, ij in enumerate(params.domain)}
    return AdjacencyFamily(params, tuple(vertices), mats)


def verify_axioms(fam: AdjacencyFamily) -> Certificate:
    """Identity, partition of all pairs, symmetry, closure and commutativity."""
    cert = Certificate("axioms", fam.params)
    with timed(cert):
        dom = fam.domain
        v = fam.v
        if not np.array_equal(fam.ints((0, 0)), np.eye(v, dtype=np.int64)):
            cert.fail(index=[0, 0], detail="A_00 is not the identity")
        total = sum(fam.ints(ij) for ij in dom)
        bad = np.argwhere(total != 1)
        for a, b in bad[:5]:
            cert.fail(index=[int(a), int(b)], expected=1, actual=int(total[a, b]),
                      detail="pair not covered by exactly one relation",
                      pair=[list(fam.vertices[a]), list(fam.vertices[b])])
        for ij in dom:
            A = fam.ints(ij)
            if not A.any():
                cert.fail(index=ij, detail="empty relation")
            if not np.array_equal(A, A.T):
                cert.fail(index=ij, detail="relation is not symmetric")
        masks = {ij: fam.ints(ij).astype(bool) for ij in dom}
        for a_idx, ij in enumerate(dom):
            for kl in dom[a_idx:]:
                prod = int_matmul(fam.ints(ij), fam.ints(kl))
                if not np.array_equal(prod, int_matmul(fam.ints(kl), fam.ints(ij))):
                    cert.fail(index=[ij, kl], detail="products do not commute")
                for mn in dom:
                    vals = np.unique(prod[masks[mn]])
                    if vals.size > 1:
                        cert.fail(index=[ij, kl, mn], detail="product not constant on relation",
                                  values=[int(t) for t in vals[:4]])
                cert.count("products")
    return cert


def _representatives(mask: np.ndarray, count: int = 5) -> list[tuple[int, int]]:
    pairs = np.argwhere(mask)
    if len(pairs) <= count:
        picks = range(len(pairs))
    else:
        picks = np.linspace(0, len(pairs) - 1, count).round().astype(int)
    return [(int(pairs[t][0]), int(pairs[t][1])) for t in picks]


def intersection_numbers(fam: AdjacencyFamily, ij: BiIndex, kl: BiIndex) -> dict[BiIndex, int]:
    """``p_{ij,kl}^{mn}`` by counting common neighbours of representative pairs."""
    A, B = fam.ints(ij), fam.ints(kl)
    out = {}
    for mn in fam.domain:
        counts = {int(np.dot(A[x], B[y])) for x, y in _representatives(fam.ints(mn) == 1)}
        if len(counts) != 1:
            raise InvariantViolation(
                f"intersection number p_{ij},{kl}^{mn} differs between representatives: {sorted(counts)}")
        out[mn] = counts.pop()
    return out


def intersection_table(fam: AdjacencyFamily) -> dict[tuple[BiIndex, BiIndex], dict[BiIndex, int]]:
    return {(ij, kl): intersection_numbers(fam, ij, kl) for ij in fam.domain for kl in fam.domain}


def adjacency_recurrence_check(fam: AdjacencyFamily) -> Certificate:
    """A_10 A_ij and A_01 A_ij against their closed-form expansions, entrywise."""
    cert = Certificate("adjacency-recurrences", fam.params)
    with timed(cert):
        for gen, expand in (((1, 0), a10_expansion), ((0, 1), a01_expansion)):
            if not fam.params.in_domain(*gen):
                continue
            G = fam.ints(gen)
            for ij in fam.domain:
                lhs = int_matmul(G, fam.ints(ij))
                rhs = np.zeros_like(lhs)
                for t, c in expand(fam.params, *ij).items():
                    rhs = rhs + c * fam.ints(t)
                diff = np.argwhere(lhs != rhs)
                if diff.size:
                    a, b = (int(t) for t in diff[0])
                    cert.fail(index=[gen, ij], expected=int(rhs[a, b]), actual=int(lhs[a, b]),
                              entry=[a, b])
                cert.count("identities")
    return cert
