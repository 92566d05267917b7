"""
Tests for sweeps, maximum searches and channel studies.
"""

import numpy as np
import pytest

from config.settings import settings
from src.models.channels import custom_channel, fm_ground_channel, neel_channel
from src.models.errors import InvalidArgumentError, ResourceLimitError
from src.models.schemas import ChainSpec, FidelityMode, FieldPolicy, Grid1D
from src.services.experiments import (
    aligned_coherence,
    compare_channels,
    fidelity_at,
    find_fmax,
    gamma_series,
    max_pairwise_difference,
    ordering_study,
    sweep_time_field,
)
from src.services.fidelity import gamma_fast
from src.services.search import golden_section_max


def window(stop: float, step: float = 0.01, start: float = 0.0) -> Grid1D:
    return Grid1D(start=start, stop=stop, step=step)


FIELD_RANGE = Grid1D(start=0.0, stop=2.0, step=0.01)


class TestGoldenSection:
    """Test the line search."""

    def test_finds_parabola_peak(self):
        x, fx = golden_section_max(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, tol=1e-8)

        assert x == pytest.approx(0.3, abs=1e-7)
        assert fx == pytest.approx(0.0, abs=1e-12)

    def test_reversed_bracket(self):
        x, _ = golden_section_max(lambda x: np.sin(x), 3.0, 0.0, tol=1e-8)

        assert x == pytest.approx(np.pi / 2, abs=1e-7)

    def test_tiny_bracket_evaluates_midpoint(self):
        x, fx = golden_section_max(lambda x: x, 1.0, 1.0 + 1e-9, tol=1e-6)

        assert x == pytest.approx(1.0 + 5e-10)
        assert fx == x


class TestGammaSeries:
    """Test chunked Γ evaluation."""

    def test_chunks_are_seamless(self, monkeypatch):
        spec = ChainSpec(n_sites=6, field=0.2)
        pair = neel_channel(6)
        jts = np.linspace(0.0, 10.0, 37)
        whole = gamma_series(spec, pair, jts)

        monkeypatch.setattr(settings, "TIME_CHUNK", 5)
        pieces = gamma_series(spec, pair, jts)

        for a, b in zip(whole, pieces):
            np.testing.assert_allclose(a, b, atol=1e-14)

    def test_jt_is_scaled_by_coupling(self):
        """Test that Jt is converted to t = Jt / |J|."""
        spec = ChainSpec(n_sites=5, coupling=-2.0, field=0.1)
        pair = fm_ground_channel(5)
        series = gamma_series(spec, pair, [3.0])

        assert series[4][0] == pytest.approx(gamma_fast(spec, pair, 1.5).gamma5)


class TestSweep:
    """Test the (Jt, h) sweep."""

    def test_shape_and_initial_row(self, chain6, neel6):
        result = sweep_time_field(chain6, neel6, window(2.0, 0.5), Grid1D(start=0.0, stop=0.5, step=0.25))

        assert result.values.shape == (5, 3)
        np.testing.assert_allclose(result.values[0], 0.5, atol=1e-14)
        assert result.channel == "neel"

    def test_single_point_matches_fidelity_at(self):
        spec = ChainSpec(n_sites=10, field=0.1)
        pair = neel_channel(10)
        result = sweep_time_field(spec, pair, Grid1D.single(6.0), Grid1D.single(0.1))

        assert result.values.shape == (1, 1)
        assert result.values[0, 0] == pytest.approx(fidelity_at(spec, pair, 6.0), abs=1e-12)

    def test_field_columns_match_direct_evaluation(self):
        """Test that rotating zero-field Γ5 reproduces a direct evaluation at every field."""
        spec = ChainSpec(n_sites=7, coupling=-1.0, field=0.9)
        pair = custom_channel(7, [3, 4, 6])
        result = sweep_time_field(spec, pair, window(4.0, 0.5), Grid1D(start=0.0, stop=1.2, step=0.3))

        for i, jt in enumerate(result.times):
            for j, h in enumerate(result.fields):
                expected = fidelity_at(spec.with_field(h), pair, jt)
                assert result.values[i, j] == pytest.approx(expected, abs=1e-12)

    def test_worker_count_does_not_change_values(self, chain6, neel6):
        t_grid = window(5.0, 0.1)
        h_grid = Grid1D(start=0.0, stop=0.5, step=0.1)
        serial = sweep_time_field(chain6, neel6, t_grid, h_grid, workers=1)
        parallel = sweep_time_field(chain6, neel6, t_grid, h_grid, workers=2)

        np.testing.assert_array_equal(serial.values, parallel.values)

    def test_argmax(self):
        spec = ChainSpec(n_sites=2)
        result = sweep_time_field(spec, fm_ground_channel(2), window(3.0, 0.01),
                                  Grid1D.single(0.0), FidelityMode.PHASE_OPTIMIZED)
        value, jt, h = result.argmax()

        assert value == pytest.approx(1.0, abs=1e-4)
        assert jt == pytest.approx(np.pi / 2, abs=0.01)
        assert h == 0.0

    def test_cell_limit(self, chain6, neel6, monkeypatch):
        monkeypatch.setattr(settings, "SWEEP_MAX_CELLS", 10)
        with pytest.raises(ResourceLimitError):
            sweep_time_field(chain6, neel6, window(1.0, 0.1), Grid1D.single(0.0))


class TestTenSitePeak:
    """Test the N = 10 Néel fidelity landscape over Jt in [0, 20], 2h/J in [0, 1]."""

    def test_value_near_jt_six(self):
        spec = ChainSpec(n_sites=10, field=0.1)

        assert fidelity_at(spec, neel_channel(10), 6.0) == pytest.approx(0.909, abs=1e-3)
        assert fidelity_at(spec, neel_channel(10), 6.0, FidelityMode.PHASE_OPTIMIZED) == pytest.approx(
            0.9295, abs=1e-3
        )

    def test_sweep_peak_location(self):
        spec = ChainSpec(n_sites=10)
        result = sweep_time_field(spec, neel_channel(10), window(20.0, 0.05),
                                  Grid1D(start=0.0, stop=0.5, step=0.025))
        value, jt, h = result.argmax()

        assert jt == pytest.approx(6.0, abs=0.2)
        assert 0.15 - 1e-9 <= 2 * h <= 0.25 + 1e-9
        assert value == pytest.approx(0.9325, abs=2e-3)


class TestAlignedCoherence:
    """Test the closed-form field optimum."""

    def test_reaches_magnitude_inside_range(self):
        gamma5 = np.array([0.4 * np.exp(1j * 2.0)])
        coherence, fields = aligned_coherence(gamma5, np.array([3.0]), (0.0, 2.0))

        assert coherence[0] == pytest.approx(0.4)
        assert np.real(gamma5[0] * np.exp(2j * fields[0] * 3.0)) == pytest.approx(0.4)
        assert 0.0 <= fields[0] <= 2.0

    def test_picks_smallest_aligned_field(self):
        # phase -pi/2 at t = 1 aligns at h = pi/4 and again at pi/4 + pi
        _, fields = aligned_coherence(np.array([-1j]), np.array([1.0]), (0.0, 5.0))

        assert fields[0] == pytest.approx(np.pi / 4)

    def test_falls_back_to_endpoint(self):
        # phase -pi/2 at t = 0.1 would need h = 2.5 pi; only [0, 1] is allowed
        coherence, fields = aligned_coherence(np.array([-1j]), np.array([0.1]), (0.0, 1.0))

        assert fields[0] == 1.0
        assert coherence[0] == pytest.approx(np.cos(-np.pi / 2 + 0.2))

    def test_zero_time_keeps_lowest_field(self):
        coherence, fields = aligned_coherence(np.array([0.3 + 0.4j]), np.array([0.0]), (0.5, 2.0))

        assert fields[0] == 0.5
        assert coherence[0] == pytest.approx(0.3)


class TestFindFmax:
    """Test the maximum search."""

    def test_degenerate_window(self):
        result = find_fmax(ChainSpec(n_sites=6, field=1.0), neel_channel(6), Grid1D.single(0.0))

        assert result.f_max == pytest.approx(0.5)
        assert result.t_max == 0.0

    def test_negative_window_rejected(self):
        with pytest.raises(InvalidArgumentError):
            find_fmax(ChainSpec(n_sites=4), neel_channel(4), window(1.0, 0.1, start=-1.0))

    def test_window_limit(self):
        with pytest.raises(ResourceLimitError):
            find_fmax(ChainSpec(n_sites=4), neel_channel(4), window(500.0, 1e-9))

    def test_window_limit_setting(self, monkeypatch):
        monkeypatch.setattr(settings, "WINDOW_MAX_POINTS", 100)
        find_fmax(ChainSpec(n_sites=4), neel_channel(4), window(0.99, 0.01))
        with pytest.raises(ResourceLimitError):
            find_fmax(ChainSpec(n_sites=4), neel_channel(4), window(1.0, 0.01))

    def test_two_site_strict_at_zero_field(self):
        """Test that f_12 = -i sin t leaves only the population terms: F = 1/2 + sin^2/6."""
        result = find_fmax(ChainSpec(n_sites=2), fm_ground_channel(2), window(3.0))

        assert result.f_max == pytest.approx(2.0 / 3.0, abs=1e-10)
        assert result.t_max == pytest.approx(np.pi / 2, abs=1e-5)

    def test_two_site_optimal_field(self):
        """Test that the field rotates -i sin t onto the real axis at h = 3 pi / (4t)."""
        result = find_fmax(ChainSpec(n_sites=2), fm_ground_channel(2), window(3.0),
                           policy=FieldPolicy.optimize(FIELD_RANGE))

        assert result.f_max == pytest.approx(1.0, abs=1e-9)
        assert result.t_max == pytest.approx(np.pi / 2, abs=1e-5)
        assert result.h_star == pytest.approx(1.5, abs=1e-4)

    def test_refinement_soundness(self, chain6, neel6):
        result = find_fmax(chain6, neel6, window(20.0, 0.05))
        direct = fidelity_at(chain6.with_field(result.h_star), neel6, result.t_max)

        assert result.f_max >= result.coarse_max - 2e-9
        assert direct == pytest.approx(result.f_max, abs=1e-9)

    def test_monotone_window(self):
        spec = ChainSpec(n_sites=8, field=0.4)
        pair = neel_channel(8)
        short = find_fmax(spec, pair, window(10.0))
        long = find_fmax(spec, pair, window(25.0))

        assert long.f_max >= short.f_max - 1e-9

    def test_worker_count_does_not_change_result(self, monkeypatch):
        monkeypatch.setattr(settings, "TIME_CHUNK", 256)
        spec = ChainSpec(n_sites=7, field=0.2)
        pair = neel_channel(7)
        serial = find_fmax(spec, pair, window(15.0), workers=1)
        parallel = find_fmax(spec, pair, window(15.0), workers=2)

        assert serial == parallel

    def test_five_sites_near_perfect_transfer(self):
        """Test N = 5 at h = 0, where both channels pass almost perfectly near Jt = 15 pi."""
        spec = ChainSpec(n_sites=5, field=0.0)
        fm = find_fmax(spec, fm_ground_channel(5), window(60.0))
        neel = find_fmax(spec, neel_channel(5), window(60.0))

        assert fm.f_max > 0.995
        assert neel.f_max == pytest.approx(fm.f_max, abs=1e-9)

    def test_phase_optimized_channels_coincide(self):
        """Test that FM and Néel share the same phase-optimized optimum."""
        spec = ChainSpec(n_sites=7, field=0.3)
        fm = find_fmax(spec, fm_ground_channel(7), window(30.0), FidelityMode.PHASE_OPTIMIZED)
        neel = find_fmax(spec, neel_channel(7), window(30.0), FidelityMode.PHASE_OPTIMIZED)

        assert neel.f_max == pytest.approx(fm.f_max, abs=1e-9)
        assert neel.t_max == pytest.approx(fm.t_max, abs=1e-5)


class TestCompareChannels:
    """Test the channel-length study."""

    def test_row_layout(self):
        rows = compare_channels([3, 4], FieldPolicy.fixed(0.0), t_window=window(5.0, 0.05))

        assert [(r.n_sites, r.channel) for r in rows] == [(3, "fm"), (3, "neel"), (4, "fm"), (4, "neel")]

    @pytest.mark.parametrize("n", [7, 11])
    def test_neel_wins_for_seven_plus_four_n(self, n):
        """Test the Néel advantage at h = 0 over the first arrival."""
        fm, neel = compare_channels([n], FieldPolicy.fixed(0.0), t_window=window(10.0))

        assert neel.f_max >= fm.f_max
        assert neel.f_max > 0.6

    @pytest.mark.parametrize("n", [5, 9])
    def test_unit_field_equality(self, n):
        """Test that FM and Néel coincide at h = 1 when the Néel channel holds an even count."""
        fm, neel = compare_channels([n], FieldPolicy.fixed(1.0), t_window=window(30.0))

        assert neel.f_max == pytest.approx(fm.f_max, abs=1e-9)
        assert neel.t_max == pytest.approx(fm.t_max, abs=1e-6)

    def test_optimal_field_equality(self):
        rows = compare_channels([4, 6], FieldPolicy.optimize(FIELD_RANGE), t_window=window(40.0))
        for fm, neel in zip(rows[0::2], rows[1::2]):
            assert neel.f_max == pytest.approx(fm.f_max, abs=1e-3)
            assert neel.t_max == pytest.approx(fm.t_max, abs=1e-3)


class TestOrderingStudy:
    """Test the excitation-ordering study."""

    def test_six_site_patterns(self, chain6):
        rows = ordering_study(chain6, [[2, 3, 4], [3, 4, 5]], t_window=window(20.0))

        assert rows[0].pattern == "neel"
        assert rows[0].delta == 0.0
        assert [r.pattern for r in rows[1:]] == ["2,3,4", "3,4,5"]
        assert max_pairwise_difference(rows) < 1e-12

    def test_repeated_pattern(self, chain6):
        rows = ordering_study(chain6, [[2, 5, 6], [2, 5, 6]], t_window=window(10.0))

        assert rows[1].fidelity == rows[2].fidelity

    def test_all_rows_share_the_reference_time(self, chain6):
        rows = ordering_study(chain6, [[3, 5, 6]], t_window=window(10.0))

        assert rows[0].t_eval == rows[1].t_eval
        assert rows[1].excitations == 3

    def test_mismatched_counts(self, chain6):
        with pytest.raises(InvalidArgumentError):
            ordering_study(chain6, [[2, 3]], t_window=window(5.0))

    def test_custom_reference(self):
        spec = ChainSpec(n_sites=5, field=0.5)
        rows = ordering_study(spec, [[3], [5]], reference_pair=custom_channel(5, [4]),
                              t_window=window(10.0))

        assert rows[0].pattern == "4"
        assert max_pairwise_difference(rows) < 1e-12


@pytest.mark.slow
class TestAcceptance:
    """Long-window runs over Jt in [0, 500]."""

    def test_five_sites_both_channels(self):
        spec = ChainSpec(n_sites=5, field=0.0)
        for pair in (fm_ground_channel(5), neel_channel(5)):
            assert find_fmax(spec, pair).f_max > 0.995

    def test_six_site_phase_optimized(self):
        """Test that the N = 6 phase-optimized peak lies near Jt = 356.5; Jt in [293, 303] stays below 0.99."""
        spec, pair = ChainSpec(n_sites=6), fm_ground_channel(6)
        result = find_fmax(spec, pair, mode=FidelityMode.PHASE_OPTIMIZED)
        near_298 = find_fmax(spec, pair, window(303.0, start=293.0), FidelityMode.PHASE_OPTIMIZED)

        assert result.f_max > 0.99
        assert result.t_max == pytest.approx(356.505, abs=0.05)
        assert near_298.f_max < 0.99

    def test_seven_sites_with_optimal_field(self):
        result = find_fmax(ChainSpec(n_sites=7), neel_channel(7),
                           policy=FieldPolicy.optimize(FIELD_RANGE))

        assert result.f_max > 0.98

    def test_optimal_field_channel_equality(self):
        rows = compare_channels(range(4, 13), FieldPolicy.optimize(FIELD_RANGE))
        for fm, neel in zip(rows[0::2], rows[1::2]):
            assert neel.f_max == pytest.approx(fm.f_max, abs=1e-3), fm.n_sites
            assert neel.t_max == pytest.approx(fm.t_max, abs=1e-3), fm.n_sites
            if fm.n_sites <= 6:
                assert fm.f_max >= 0.995

    def test_fifteen_site_ordering(self):
        spec = ChainSpec(n_sites=15, field=0.0)
        rows = ordering_study(spec, [[3, 4, 6, 10, 11, 12, 14], [2, 3, 7, 8, 10, 11, 13]])

        assert max_pairwise_difference(rows) < 1e-12
