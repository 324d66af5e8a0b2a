from fractions import Fraction

import numpy as np
import pytest

from haarint.catalog import DiagramCatalog
from haarint.errors import IndexOutOfRange, PoleAtValue
from haarint.integrals import parse_integral
from haarint.ratfield import RationalFunction, linear
from haarint.verify import (
    McReport,
    MonteCarloVerifier,
    SuiteItem,
    _Moments,
    check_suite,
    index_factors,
    mc_estimate,
    monomial_values,
    sample_haar,
    sample_haar_batch,
    unitarity_residual,
)

EXCHANGE = parse_integral("conj: 1,1; 2,2; plain: 1,2; 2,1")
SIGMA = parse_integral("conj: b,e; b,d; a,d; a,c; plain: b,e; b,d; a,d; a,c")


@pytest.mark.parametrize("n", [1, 3, 5, 8])
def test_samples_are_unitary(n):
    batch = sample_haar_batch(n, 200, rng=n)
    assert batch.shape == (200, n, n)
    assert unitarity_residual(batch) <= 1e-12
    assert unitarity_residual(sample_haar(n, rng=2)) <= 1e-12


def test_one_dimensional_samples_are_uniform_phases():
    size = 40_000
    u = sample_haar_batch(1, size, rng=6)[:, 0, 0]
    assert np.allclose(np.abs(u), 1.0, atol=1e-12)
    # Real and imaginary parts of a uniform phase each have variance 1/2.
    bound = 5 * np.sqrt(0.5 / size)
    assert abs(u.mean().real) <= bound
    assert abs(u.mean().imag) <= bound
    quadrants = np.bincount(((np.angle(u) + np.pi) // (np.pi / 2)).astype(int) % 4, minlength=4)
    expected = size / 4
    assert np.all(np.abs(quadrants - expected) <= 5 * np.sqrt(expected * 3 / 4))


def test_first_moments_match_one_over_n():
    n, size = 3, 20_000
    weights = np.abs(sample_haar_batch(n, size, rng=8)) ** 2
    mean = weights.mean(axis=0)
    stderr = weights.std(axis=0, ddof=1) / np.sqrt(size)
    assert mean.shape == (n, n)
    assert np.all(np.abs(mean - 1 / n) <= 5 * stderr)


def test_relabeled_integral_estimates_agree():
    relabeled = parse_integral("conj: 3,2; 1,3; plain: 3,3; 1,2")
    original = mc_estimate(EXCHANGE, 3, 100_000, rng_state=12, chunk_size=25_000)
    renamed = mc_estimate(relabeled, 3, 100_000, rng_state=13, chunk_size=25_000)
    assert renamed.symbolic_value == original.symbolic_value == Fraction(-1, 24)
    combined = np.hypot(original.stderr, renamed.stderr)
    assert abs(original.estimate.real - renamed.estimate.real) <= 5 * combined
    assert not renamed.flagged


def test_sampling_is_seeded():
    a = sample_haar_batch(3, 5, rng=7)
    b = sample_haar_batch(3, 5, rng=7)
    assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        sample_haar_batch(0, 1)


def test_index_factors():
    conj, plain = index_factors(SIGMA, 3)
    assert conj == [(0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 2, 1)]
    assert plain == conj
    conj, plain = index_factors(parse_integral("conj: 2,3,2; plain: 2,3,2"), 3)
    assert conj == [(1, 2, 2)]
    with pytest.raises(IndexOutOfRange):
        index_factors(parse_integral("conj: 1,7; plain: 1,7"), 3)
    with pytest.raises(IndexOutOfRange):
        index_factors(SIGMA, 2)


def test_monomial_values_on_identity():
    u = np.eye(3, dtype=complex)[np.newaxis]
    conj, plain = index_factors(parse_integral("conj: 1,1,2; 2,2; plain: 1,1,2; 2,2"), 3)
    assert monomial_values(u, conj, plain)[0] == 1


def test_moment_merge_matches_direct():
    rng = np.random.default_rng(0)
    values = rng.standard_normal(1000) + 1j * rng.standard_normal(1000)
    merged = _Moments.of(values[:300]).merge(_Moments.of(values[300:]))
    direct = _Moments.of(values)
    assert merged.count == 1000
    assert merged.mean == pytest.approx(direct.mean)
    assert merged.m2_real == pytest.approx(direct.m2_real)
    assert merged.m2_imag == pytest.approx(direct.m2_imag)
    assert _Moments().merge(direct) is direct


def test_exchange_integral_estimate():
    report = mc_estimate(EXCHANGE, 3, 100_000, rng_state=3, chunk_size=25_000)
    assert report.samples == 100_000
    assert report.symbolic_value == Fraction(-1, 24)
    assert report.z_score <= 5
    assert report.z_imag <= 5
    assert not report.flagged


def test_estimate_is_independent_of_jobs():
    serial = mc_estimate(SIGMA, 3, 20_000, rng_state=11, chunk_size=5_000, batch_size=2_000)
    parallel = mc_estimate(SIGMA, 3, 20_000, rng_state=11, chunk_size=5_000, batch_size=2_000, jobs=2)
    assert serial.estimate == parallel.estimate
    assert serial.stderr == parallel.stderr
    assert serial.symbolic_value == Fraction(1, 135)


def test_vanishing_integral_estimate():
    report = mc_estimate(parse_integral("conj: 1,1; plain: 1,2"), 3, 50_000, rng_state=5)
    assert report.symbolic_value == 0
    assert not report.flagged


def test_expected_value_override_and_pole():
    wrong = RationalFunction(1, 2)
    report = mc_estimate(EXCHANGE, 3, 20_000, rng_state=1, expected=wrong)
    assert report.symbolic_value == Fraction(1, 2)
    assert report.flagged
    with pytest.raises(PoleAtValue):
        mc_estimate(EXCHANGE, 3, 1_000, expected=RationalFunction(1, linear(-3)))


def test_check_suite_records_failures():
    items = [
        SuiteItem("exchange", EXCHANGE),
        SuiteItem("too wide", parse_integral("conj: 1,7; plain: 1,7")),
    ]
    reports = check_suite(items, [3], 10_000, rng_state=2)
    assert [report.name for report in reports] == ["exchange", "too wide"]
    assert reports[0].error is None
    assert "outside" in reports[1].error
    assert reports[1].flagged
    assert reports[1].samples == 0


def test_report_to_dict():
    report = McReport(integral=EXCHANGE, n=3, samples=10, seed=0, name="exchange", symbolic_value=Fraction(-1, 24))
    data = report.to_dict()
    assert data["symbolic_value"] == "-1/24"
    assert data["integral"] == "conj: 1,1; 2,2; plain: 1,2; 2,1"
    assert data["flagged"] is False


def test_verifier_uses_config():
    verifier = MonteCarloVerifier({"montecarlo": {"samples": 4_000, "chunk_size": 1_000, "seed": 9}})
    assert verifier.samples == 4_000
    assert verifier.options["chunk_size"] == 1_000
    report = verifier.estimate(EXCHANGE, 3)
    assert report.samples == 4_000
    assert report.seed == 9
    assert verifier.estimate(EXCHANGE, 3).estimate == report.estimate


def test_acceptance_suite_small_run():
    items = DiagramCatalog().acceptance_suite()
    reports = check_suite(items, [3], 20_000, rng_state=0)
    assert all(report.error is None for report in reports)
    assert not any(report.flagged for report in reports)


@pytest.mark.slow
def test_acceptance_suite_full_run():
    items = DiagramCatalog().acceptance_suite()
    reports = check_suite(items, [3, 5], 1_000_000, rng_state=0, jobs=4)
    assert len(reports) == 2 * len(items)
    assert not any(report.flagged for report in reports)
