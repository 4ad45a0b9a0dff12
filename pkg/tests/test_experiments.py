"""Random-game generation, the experiment runner, and stats export."""

import json
import random
from fractions import Fraction

import pytest

from wvg import (
    Engine,
    ExperimentConfig,
    Game,
    IndexKind,
    InvalidConfigError,
    ResourceLimitError,
    export_stats,
    generate_game,
    run_experiment,
    scan_game,
    stats_from_json,
)
from wvg.experiments import HISTOGRAM_BINS, histogram_bin, round_half_away

SH = IndexKind.SHAPLEY_SHUBIK
BZ = IndexKind.BANZHAF

TINY = ExperimentConfig(
    weight_mean=12.0,
    weight_sigma_set=(3.0, 6.0),
    player_range=(3, 6),
    games_per_cell=8,
    seed=5,
)


class TestRounding:
    def test_half_away_from_zero(self):
        assert round_half_away(2.5) == 3
        assert round_half_away(3.5) == 4
        assert round_half_away(-2.5) == -3
        assert round_half_away(0.4) == 0
        assert round_half_away(-0.5) == -1


class TestGeneration:
    def test_deterministic_per_seed(self):
        a = generate_game(TINY, random.Random(7), 3.0)
        b = generate_game(TINY, random.Random(7), 3.0)
        assert a == b

    def test_respects_player_range_and_validity(self):
        rng = random.Random(0)
        for _ in range(300):
            game = generate_game(TINY, rng, 6.0)
            assert 3 <= game.num_players <= 6
            assert all(w >= 1 for w in game.weights)
            assert 1 <= game.quota <= game.total_weight()

    def test_unanimity_mode(self):
        config = ExperimentConfig(
            weight_mean=12.0, weight_sigma_set=(3.0,), player_range=(3, 6),
            games_per_cell=4, unanimity_quota=True,
        )
        rng = random.Random(1)
        for _ in range(50):
            game = generate_game(config, rng, 3.0)
            assert game.is_unanimity()

    def test_weight_mean_tracks_mu(self):
        config = ExperimentConfig(
            weight_mean=200.0, weight_sigma_set=(50.0,), player_range=(5, 24),
            games_per_cell=1,
        )
        rng = random.Random(123)
        draws = []
        while len(draws) < 10_000:
            draws.extend(generate_game(config, rng, 50.0).weights)
        mean = sum(draws) / len(draws)
        assert abs(mean - 200.0) < 5.0


class TestScanGame:
    def test_no_beneficial_anywhere(self):
        record = scan_game(Game(5, (2, 2, 2)), SH)
        assert not record.has_beneficial
        assert record.beneficial_fraction == 0

    def test_all_beneficial(self):
        record = scan_game(Game(6, (2, 2, 2)), SH)
        assert record.has_beneficial
        assert record.beneficial_fraction == 1

    def test_counts_partition(self):
        record = scan_game(Game(17, (9, 4, 3, 2)), BZ)
        for s in record.scans:
            assert s.beneficial + s.harmful + s.neutral == s.total_splits


class TestRunner:
    def test_reproducible(self):
        assert run_experiment(TINY) == run_experiment(TINY)

    def test_stats_consistency(self):
        stats = run_experiment(TINY)
        assert stats.games_total == 16
        assert sum(stats.histogram) == stats.games_total
        assert len(stats.histogram) == HISTOGRAM_BINS
        assert sum(c.games for c in stats.cells) == stats.games_total
        assert (
            stats.splits_beneficial + stats.splits_harmful + stats.splits_neutral
            == stats.splits_total
        )
        assert 0 <= stats.frac_games_with_beneficial <= 1
        assert 0 <= stats.overall_beneficial_fraction <= 1

    def test_exact_mode_ignores_epsilon_delta(self):
        import dataclasses

        a = run_experiment(TINY)
        b = run_experiment(
            dataclasses.replace(TINY, epsilon=Fraction(1, 7), delta=Fraction(1, 9))
        )
        assert a == b

    def test_unanimity_control_hits_every_game(self):
        config = ExperimentConfig(
            weight_mean=12.0, weight_sigma_set=(3.0,), player_range=(3, 6),
            games_per_cell=10, seed=9, unanimity_quota=True,
        )
        stats = run_experiment(config)
        assert stats.frac_games_with_beneficial == 1

    def test_monte_carlo_engine(self):
        config = ExperimentConfig(
            weight_mean=8.0,
            weight_sigma_set=(2.0,),
            player_range=(3, 4),
            games_per_cell=2,
            epsilon=Fraction(1, 10),
            delta=Fraction(1, 10),
            seed=2,
            engine=Engine.MONTE_CARLO,
            kind=BZ,
        )
        stats = run_experiment(config)
        assert stats.engine is Engine.MONTE_CARLO
        assert stats.games_total == 2
        assert run_experiment(config) == stats

    def test_quota_ceiling(self):
        config = ExperimentConfig(
            weight_mean=50.0, weight_sigma_set=(5.0,), player_range=(5, 8),
            games_per_cell=2, dp_quota_ceiling=10, seed=1,
        )
        with pytest.raises(ResourceLimitError):
            run_experiment(config)

    def test_faithful_preset_shape(self):
        config = ExperimentConfig.faithful(seed=3, kind=BZ)
        assert config.weight_mean == 200.0
        assert config.weight_sigma_set == tuple(float(s) for s in range(5, 55, 5))
        assert config.player_range == (5, 24)
        assert config.engine is Engine.MONTE_CARLO
        assert config.kind is BZ

    def test_config_validation(self):
        with pytest.raises(InvalidConfigError):
            ExperimentConfig(player_range=(1, 4))
        with pytest.raises(InvalidConfigError):
            ExperimentConfig(games_per_cell=0)
        with pytest.raises(InvalidConfigError):
            ExperimentConfig(weight_sigma_set=(0.0,))


class TestExport:
    def test_csv_schema(self):
        stats = run_experiment(TINY)
        csv = export_stats(stats, "csv")
        lines = csv.strip().splitlines()
        assert lines[0] == "sigma,n_players,games,frac_with_beneficial,mean_beneficial_fraction"
        assert len(lines) == 1 + len(stats.cells)

    def test_json_round_trip_is_identical(self):
        stats = run_experiment(TINY)
        text = export_stats(stats, "json")
        assert stats_from_json(text) == stats

    def test_json_series_and_histogram_shape(self):
        stats = run_experiment(TINY)
        obj = json.loads(export_stats(stats, "json"))
        assert obj["histogram"]["bin_width"] == 0.005
        assert len(obj["histogram"]["counts"]) == HISTOGRAM_BINS
        assert {s["sigma"] for s in obj["series"]["proportion_vs_sigma"]} == {3.0, 6.0}
        assert all("frac_with_beneficial" in s for s in obj["series"]["proportion_vs_players"])

    def test_unknown_format(self):
        with pytest.raises(InvalidConfigError):
            export_stats(run_experiment(TINY), "xml")

    def test_histogram_binning(self):
        assert histogram_bin(Fraction(0)) == 0
        assert histogram_bin(Fraction(1, 300)) == 0  # anything below 0.5% lands in bin 0
        assert histogram_bin(Fraction(1, 200)) == 1
        assert histogram_bin(Fraction(1, 2)) == 100
        assert histogram_bin(Fraction(1)) == HISTOGRAM_BINS - 1
