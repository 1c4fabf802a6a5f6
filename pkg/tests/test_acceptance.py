"""One test per acceptance criterion; a summary line per criterion is printed at the end of the run."""
import time

import pytest

from nbjohnson.bispectral import algebra_relations_check, difference_relation_check
from nbjohnson.orthopoly import orthopoly_suite
from nbjohnson.polystructure import certify_P, certify_Q, dual_recurrence_check
from nbjohnson.scheme import SchemeParams, adjacency_recurrence_check, build_adjacency, verify_axioms
from nbjohnson.spectra import (SpectralData, idempotent_check, intersection_agreement_check, krein_check,
                               multiplicity_check, wilson_duality_check)
from nbjohnson.terwilliger import terwilliger_check

from conftest import ACCEPTANCE_LINES, instance

INSTANCES = [(3, 2, 3), (3, 2, 4), (4, 2, 5), (3, 3, 6)]
EXPECTED_V = {(3, 2, 3): 12, (3, 2, 4): 24, (4, 2, 5): 90, (3, 3, 6): 160}


def _record(number: int, title: str, failures: list[str]) -> None:
    verdict = "PASS" if not failures else "FAIL"
    line = f"criterion {number:>2}: {verdict}  {title}"
    if failures:
        line += "  <- " + "; ".join(failures[:3])
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, failures


def _certs_fail(certs) -> list[str]:
    return [f"{c} {c.witnesses[:1]}" for c in certs if not c.passed]


def test_criterion_01_axioms():
    start = time.perf_counter()
    failures = []
    for rkn in INSTANCES:
        fam = build_adjacency(SchemeParams(*rkn))
        if fam.v != EXPECTED_V[rkn]:
            failures.append(f"v={fam.v} for {rkn}")
        failures += _certs_fail([verify_axioms(fam)])
    elapsed = time.perf_counter() - start
    if elapsed > 120:
        failures.append(f"took {elapsed:.1f}s")
    _record(1, f"scheme axioms on 4 instances ({elapsed:.2f}s)", failures)


def test_criterion_02_adjacency_recurrences():
    certs = [adjacency_recurrence_check(instance(*rkn)[0]) for rkn in INSTANCES]
    _record(2, "A10 A_ij and A01 A_ij expansions entrywise", _certs_fail(certs))


def test_criterion_03_eigen_machinery():
    certs = []
    for rkn in INSTANCES:
        fam, spectral, idem = instance(*rkn)
        certs += [multiplicity_check(spectral), idempotent_check(fam, spectral, idem), wilson_duality_check(spectral),
                  intersection_agreement_check(fam, spectral), krein_check(spectral, fam, idem)]
    _record(3, "idempotents, spectral decomposition, Wilson duality, intersection numbers",
            _certs_fail(certs))


def test_criterion_04_p_polynomial():
    certs = [certify_P(SchemeParams(*rkn), instance(*rkn)[1]) for rkn in INSTANCES]
    _record(4, "certify_P with type (1,0)", _certs_fail(certs))


def test_criterion_05_q_polynomial():
    failures = []
    for rkn in INSTANCES:
        params = SchemeParams(*rkn)
        assert params.q_polynomial_range
        failures += _certs_fail([certify_Q(instance(*rkn)[1])])
    negative = certify_Q(SpectralData(SchemeParams(3, 3, 4)))
    witnessed = any(w.get("detail") == "(0,2) ≼ (2,1) ∉ D" for w in negative.witnesses)
    if negative.verdict != "fail" or not witnessed:
        failures.append(f"J_3(3,4) gave {negative.verdict} without the (0,2) ≼ (2,1) witness")
    _record(5, "certify_Q with type (0,1/2); J_3(3,4) fails on (0,2) ≼ (2,1)", failures)


def test_criterion_06_dual_recurrences():
    certs = [dual_recurrence_check(instance(*rkn)[1]) for rkn in INSTANCES]
    failures = _certs_fail(certs)
    if not any(c.stats.get("krein-fallbacks") for c in certs):
        failures.append("no 0/0 incident exercised")
    _record(6, "dual recurrences: closed forms = Krein, 0/0 resolved by Krein", failures)


def test_criterion_07_difference_relations():
    certs = [difference_relation_check(instance(*rkn)[1]) for rkn in INSTANCES]
    failures = _certs_fail(certs)
    if not any(c.stats.get("duality-fallbacks") for c in certs):
        failures.append("no vanishing denominator exercised")
    _record(7, "difference relations with duality-route fallback", failures)


def test_criterion_08_bispectral_algebra():
    certs = [algebra_relations_check(SchemeParams(*rkn)) for rkn in INSTANCES]
    failures = _certs_fail(certs)
    failures += [str(c) for c in certs if c.stats.get("relations") != 7]
    _record(8, "seven bispectral-algebra identities", failures)


def test_criterion_09_terwilliger():
    failures = []
    for rkn in INSTANCES:
        fam, spectral, idem = instance(*rkn)
        cert = terwilliger_check(fam, spectral, idem)
        failures += _certs_fail([cert])
        if cert.stats.get("bases", 0) < 3:
            failures.append(f"only {cert.stats.get('bases')} bases on {rkn}")
        negatives = [k for k in cert.stats if k.startswith("raw-generators-differ") and ".nonzero." in k]
        if not negatives:
            failures.append(f"no nonzero raw-generator residual on {rkn}")
        applied = sum(v for k, v in cert.stats.items()
                      if k.startswith("subconstituent-relations") and k.endswith(".relations"))
        if applied != 5 * cert.stats["bases"]:
            failures.append(f"{applied} relations checked on {rkn}")
    _record(9, "five subconstituent relations on 3 bases, primary module, raw-generator negative",
            failures)


def test_criterion_10_orthopoly():
    start = time.perf_counter()
    cert = orthopoly_suite(10)
    elapsed = time.perf_counter() - start
    failures = _certs_fail([cert])
    needed = ("eberlein-forms", "krawtchouk-recurrence", "hahn-recurrence", "bridges", "parameter-shift")
    failures += [f"{k} never evaluated" for k in needed if not cert.stats.get(k)]
    if elapsed > 30:
        failures.append(f"took {elapsed:.1f}s")
    _record(10, f"orthopoly identities on N <= 10 ({elapsed:.2f}s)", failures)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
