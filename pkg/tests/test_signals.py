import numpy as np
import pytest

from blindcent.filters import FilterSpec, apply_filter, parse_filter
from blindcent.graphs import Graph, adjacency, erdos_renyi
from blindcent.signals import (
    SignalEnsemble,
    covariance_deviation,
    generate_signals,
    population_covariance,
    sample_covariance,
    write_signals_csv,
)
from blindcent.spectral import eig_sym

P3 = adjacency(Graph.from_edges(3, [(0, 1), (1, 2)]))


def ensemble_from_rows(rows) -> SignalEnsemble:
    signals = np.asarray(rows, dtype=float)
    from blindcent.signals import Provenance

    return SignalEnsemble(
        signals=signals, m=signals.shape[0], provenance=Provenance(None, None, None)
    )


class TestGenerateSignals:
    def test_zero_filter_gives_zero_signals(self):
        h = apply_filter(FilterSpec.polynomial([0.0]), P3)
        ensemble = generate_signals(h, 50, 0)
        assert np.all(ensemble.signals == 0.0)

    def test_identity_filter_covariance_converges(self):
        h = apply_filter(FilterSpec.polynomial([1.0]), P3)
        cov = sample_covariance(generate_signals(h, 10**5, 42))
        assert np.abs(cov.entries - np.eye(3)).max() < 0.05

    def test_sqrt_filter_covariance_converges_to_h_squared(self):
        h = apply_filter(parse_filter("sqrt"), P3)
        cov = sample_covariance(generate_signals(h, 10**5, 7))
        assert np.abs(cov.entries - h.entries @ h.entries).max() < 0.05

    def test_deterministic_per_seed(self):
        h = apply_filter(parse_filter("sqrt"), P3)
        a = generate_signals(h, 10, 3)
        b = generate_signals(h, 10, 3)
        np.testing.assert_array_equal(a.signals, b.signals)

    def test_rademacher_noise(self):
        h = apply_filter(FilterSpec.polynomial([1.0]), P3)
        ensemble = generate_signals(h, 2000, 1, noise="rademacher")
        assert set(np.round(np.unique(ensemble.signals), 12)) == {-1.0, 1.0}
        cov = sample_covariance(ensemble)
        assert np.abs(cov.entries - np.eye(3)).max() < 0.1

    def test_rejects_bad_m(self):
        h = apply_filter(parse_filter("sqrt"), P3)
        with pytest.raises(ValueError):
            generate_signals(h, 0, 0)

    def test_provenance_records_seed_and_filter(self):
        h = apply_filter(parse_filter("sqrt"), P3)
        ensemble = generate_signals(h, 5, 11)
        assert ensemble.provenance.seed == 11
        assert ensemble.provenance.filter == "sqrt"
        assert ensemble.provenance.graph_hash


class TestPopulationCovariance:
    def test_identity_filter(self):
        h = apply_filter(FilterSpec.polynomial([1.0]), P3)
        np.testing.assert_allclose(
            population_covariance(h).entries, np.eye(3), atol=1e-12
        )

    def test_spectrum_squares(self):
        # identity filter on P3 has spectrum (0, 0.5, 1); covariance squares it
        h = apply_filter(parse_filter("identity"), P3)
        np.testing.assert_allclose(h.spectrum, [0.0, 0.5, 1.0], atol=1e-15)
        eigenvalues = np.linalg.eigvalsh(population_covariance(h).entries)
        np.testing.assert_allclose(np.sort(eigenvalues), [0.0, 0.25, 1.0], atol=1e-12)

    def test_adjacency_filter_squares_to_a2(self):
        # 3x3 product by hand: A^2 of the path graph
        h = apply_filter(FilterSpec.polynomial([0.0, 1.0]), P3)
        expected = np.array([[1.0, 0, 1], [0, 2, 0], [1, 0, 1]])
        np.testing.assert_allclose(population_covariance(h).entries, expected, atol=1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_matrix_product_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 31))
        a = adjacency(erdos_renyi(n, 0.4, seed))
        if np.abs(a).max() == 0.0:
            return
        h = apply_filter(parse_filter("squared"), a)
        oracle = h.entries @ h.entries
        assert np.abs(population_covariance(h).entries - oracle).max() <= 1e-8

    def test_commutes_with_adjacency(self):
        a = adjacency(erdos_renyi(20, 0.3, 2))
        h = apply_filter(parse_filter("sqrt"), a)
        c = population_covariance(h).entries
        scale = 1.0 + np.abs(a).max() * np.abs(c).max()
        assert np.abs(c @ a - a @ c).max() <= 1e-7 * scale


class TestSampleCovariance:
    def test_two_opposite_signals(self):
        cov = sample_covariance(ensemble_from_rows([[1.0, 0.0], [-1.0, 0.0]]))
        np.testing.assert_allclose(cov.entries, [[1.0, 0.0], [0.0, 0.0]])

    def test_single_signal_is_zero_matrix(self):
        cov = sample_covariance(ensemble_from_rows([[3.0, -2.0, 1.0]]))
        np.testing.assert_array_equal(cov.entries, np.zeros((3, 3)))

    def test_identical_signals_are_zero_matrix(self):
        cov = sample_covariance(ensemble_from_rows([[2.0, 1.0]] * 4))
        np.testing.assert_allclose(cov.entries, np.zeros((2, 2)), atol=1e-15)

    def test_uses_1_over_m_normalization(self):
        # mean (0.5, 0), centered rows (+-0.5, 0): C = (1/2) * 2 * 0.25 e1e1^T
        cov = sample_covariance(ensemble_from_rows([[1.0, 0.0], [0.0, 0.0]]))
        np.testing.assert_allclose(cov.entries, [[0.25, 0.0], [0.0, 0.0]])

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(0)
        signals = rng.standard_normal((40, 6))
        perm = rng.permutation(6)
        cov = sample_covariance(ensemble_from_rows(signals)).entries
        cov_perm = sample_covariance(ensemble_from_rows(signals[:, perm])).entries
        np.testing.assert_allclose(cov_perm, cov[np.ix_(perm, perm)], atol=1e-12)

    def test_psd(self):
        rng = np.random.default_rng(1)
        cov = sample_covariance(ensemble_from_rows(rng.standard_normal((10, 5))))
        assert np.linalg.eigvalsh(cov.entries).min() >= -1e-8


class TestCovarianceDeviation:
    def test_identical_is_zero(self):
        h = apply_filter(parse_filter("sqrt"), P3)
        c = population_covariance(h)
        assert covariance_deviation(c, c) == 0.0

    def test_diagonal_difference(self):
        from blindcent.signals import CovarianceMatrix

        a = CovarianceMatrix(np.diag([0.3, -0.1]) + np.eye(2), "population")
        b = CovarianceMatrix(np.eye(2), "population")
        assert covariance_deviation(a, b) == pytest.approx(0.3)

    def test_rank_one_difference(self):
        from blindcent.signals import CovarianceMatrix

        v = np.array([3.0, 4.0]) / 5.0
        a = CovarianceMatrix(0.2 * np.outer(v, v), "population")
        b = CovarianceMatrix(np.zeros((2, 2)), "population")
        assert covariance_deviation(a, b) == pytest.approx(0.2)

    def test_dimension_mismatch(self):
        from blindcent.signals import CovarianceMatrix

        with pytest.raises(ValueError):
            covariance_deviation(
                CovarianceMatrix(np.eye(2), "population"),
                CovarianceMatrix(np.eye(3), "population"),
            )

    def test_decreases_with_m(self):
        # cheap consistency check; the strict slope test runs in acceptance
        a = adjacency(erdos_renyi(20, 0.3, 6))
        h = apply_filter(parse_filter("sqrt"), a)
        cy = population_covariance(h)
        med = {}
        for m in (250, 2000):
            devs = [
                covariance_deviation(
                    sample_covariance(
                        generate_signals(h, m, np.random.default_rng((s, m)))
                    ),
                    cy,
                )
                for s in range(10)
            ]
            med[m] = float(np.median(devs))
        assert med[2000] < med[250]


@pytest.mark.parametrize("seed", range(4))
def test_population_covariance_equals_squared_spectrum_reconstruction(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 31))
    a = adjacency(erdos_renyi(n, 0.5, seed + 100))
    decomposition = eig_sym(a)
    for name in ("sqrt", "squared-hp"):
        h = apply_filter(parse_filter(name), a, decomposition=decomposition)
        q = decomposition.eigenvectors
        oracle = (q * h.spectrum**2) @ q.T
        assert np.abs(population_covariance(h).entries - oracle).max() <= 1e-8


def test_write_signals_csv(tmp_path):
    h = apply_filter(parse_filter("sqrt"), P3)
    ensemble = generate_signals(h, 4, 9)
    path = tmp_path / "signals.csv"
    write_signals_csv(path, ensemble)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# n=3 m=4 seed=9 filter=sqrt")
    assert len(lines) == 5
    parsed = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    np.testing.assert_allclose(parsed, ensemble.signals)
