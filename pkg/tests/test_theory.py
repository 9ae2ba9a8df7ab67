import math

import numpy as np
import pytest

from blindcent.errors import ZeroEigengapError, ZeroEntryError
from blindcent.filters import apply_filter, parse_filter
from blindcent.graphs import adjacency, eigenvector_centrality, erdos_renyi, is_connected
from blindcent.harness import build_graph_context
from blindcent.signals import population_covariance
from blindcent.spectral import eig_sym, sin_angle
from blindcent.theory import (
    alignment_bound,
    bound_report,
    deviation_bound,
    empirical_alignment_check,
    loglog_slope,
    sample_requirement,
)


def connected_er(n, p, seed):
    for s in range(seed, seed + 50):
        g = erdos_renyi(n, p, s)
        if is_connected(g):
            return g
    raise AssertionError("no connected draw found")


class TestDeviationBound:
    def test_quadruple_m_halves_bound(self):
        b1 = deviation_bound(1.0, 1.0, 100, 0.1)
        b2 = deviation_bound(1.0, 1.0, 400, 0.1)
        assert b2 == pytest.approx(b1 / 2)

    def test_log_term_unit(self):
        assert deviation_bound(1.0, 1.0, 1, 1 / math.e) == pytest.approx(1.0)

    def test_derived_combination(self):
        # 2 * sqrt(1 * 4 / 16) = 1
        assert deviation_bound(2.0, 4.0, 16, 1 / math.e) == pytest.approx(1.0)

    def test_monotone_in_m_and_eta(self):
        assert deviation_bound(1.0, 1.0, 200, 0.1) < deviation_bound(1.0, 1.0, 100, 0.1)
        assert deviation_bound(1.0, 1.0, 100, 0.01) > deviation_bound(1.0, 1.0, 100, 0.1)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(cy_norm=1.0, r=1.0, m=0, eta=0.1),
            dict(cy_norm=1.0, r=1.0, m=1, eta=0.0),
            dict(cy_norm=1.0, r=1.0, m=1, eta=1.0),
            dict(cy_norm=1.0, r=-1.0, m=1, eta=0.1),
            dict(cy_norm=1.0, r=1.0, m=1, eta=0.1, scale=0.0),
        ],
    )
    def test_domain_violations(self, kwargs):
        with pytest.raises(ValueError):
            deviation_bound(**kwargs)


class TestAlignmentBound:
    def test_basic_ratio(self):
        assert alignment_bound(0.1, 0.4) == pytest.approx(0.5)

    def test_zero_deviation(self):
        assert alignment_bound(0.0, 0.123) == 0.0

    def test_capped_at_one(self):
        assert alignment_bound(1.0, 0.5) == 1.0

    def test_zero_eigengap_raises(self):
        with pytest.raises(ZeroEigengapError):
            alignment_bound(0.1, 0.0)


class TestSampleRequirement:
    def test_constant_vector_n4(self):
        u = np.full(4, 0.5)
        assert sample_requirement(u, 1.0) == pytest.approx(4.0)

    def test_published_scale_combination(self):
        # arithmetic: 500 / (1.97e-4)^2
        u = np.full(500, 1 / math.sqrt(500))
        expected = 500.0 / (1.97e-4) ** 2
        assert sample_requirement(u, 1.97e-4) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(1.288e10, rel=1e-3)

    def test_quadratic_in_min_entry(self):
        u = np.array([0.1, 0.2, 0.2])
        v = np.array([0.05, 0.2, 0.2])
        assert sample_requirement(v, 1.0) == pytest.approx(4 * sample_requirement(u, 1.0))

    def test_zero_entry_raises(self):
        with pytest.raises(ZeroEntryError):
            sample_requirement(np.array([0.0, 1.0]), 1.0)

    def test_zero_eigengap_raises(self):
        with pytest.raises(ZeroEigengapError):
            sample_requirement(np.array([0.5, 0.5]), 0.0)

    def test_lower_bounded_by_n_over_delta_squared(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            u = rng.uniform(0.01, 1.0, size=8)
            u /= np.linalg.norm(u)
            assert sample_requirement(u, 0.3) >= 8 / 0.3**2 - 1e-6
        constant = np.full(8, 1 / math.sqrt(8))
        assert sample_requirement(constant, 0.3) == pytest.approx(8 / 0.3**2)

    def test_monotone_in_delta(self):
        u = np.array([0.3, 0.4, 0.5])
        assert sample_requirement(u, 0.1) > sample_requirement(u, 0.2)


def test_bound_report_fields():
    u = np.full(4, 0.5)
    report = bound_report(cy_norm=1.0, r=1.0, m=100, eta=0.1, delta=0.5, u=u)
    assert report.deviation_bound > 0
    assert report.alignment_bound == pytest.approx(
        min(1.0, 2 * report.deviation_bound / 0.5)
    )
    assert report.sample_requirement == pytest.approx(16.0)
    assert report.c0_scale == 1.0
    assert report.confidence == 0.1


def test_loglog_slope_recovers_power_law():
    x = np.array([10.0, 100.0, 1000.0])
    y = 5.0 * x**-0.5
    assert loglog_slope(x, y) == pytest.approx(-0.5)


class TestEmpiricalAlignment:
    def test_population_covariance_has_exact_eigenvectors(self):
        g = connected_er(15, 0.4, 0)
        a = adjacency(g)
        decomposition = eig_sym(a)
        u = eigenvector_centrality(a)
        spec = parse_filter("sqrt")
        h = apply_filter(spec, a, decomposition=decomposition)
        cov = population_covariance(h)
        d = eig_sym(cov.entries)
        from blindcent.filters import centrality_index_in_cy

        j = centrality_index_in_cy(spec, decomposition.eigenvalues)
        assert sin_angle(d.eigenvectors[:, j], u) <= 1e-7

    def test_large_m_consistency(self):
        g = connected_er(20, 0.3, 1)
        check = empirical_alignment_check(g, parse_filter("sqrt"), [10**5], trials=5, seed=3)
        sins = [rec.sin_theta for rec in check.records]
        assert float(np.median(sins)) < 0.1

    def test_slope_in_sqrt_band(self):
        g = connected_er(30, 0.3, 2)
        check = empirical_alignment_check(
            g, parse_filter("sqrt"), [250, 500, 1000, 2000, 4000], trials=10, seed=4
        )
        assert -0.65 <= check.slope <= -0.35
        assert check.coverage >= 0.95

    def test_rejects_empty_grid(self):
        g = connected_er(10, 0.5, 5)
        with pytest.raises(ValueError):
            empirical_alignment_check(g, parse_filter("sqrt"), [], trials=2, seed=0)


def test_localization_ordering_across_rewiring():
    # delocalization raises the smallest centrality entry, lowering the
    # sample requirement at matched eigengap
    mins = {}
    for p_index, p in enumerate((0.01, 1.0)):
        values = []
        for rep in range(20):
            ctx = build_graph_context("ws", 500, p, 4, 21, 90, rep, p_index=p_index)
            values.append(float(ctx.centrality.min()))
        mins[p] = float(np.mean(values))
    assert mins[1.0] > mins[0.01]
