import numpy as np
from django.test import SimpleTestCase, tag
from scipy.stats import spearmanr
from sklearn.metrics import f1_score

from tsf.analysis.edges import collect_edges, edge_histograms, select_activities
from tsf.analysis.noise import NOISE_COLUMNS, attention_log, inject_noise, noise_study
from tsf.analysis.report import AnalysisReport
from tsf.analysis.routes import (infer_routes, magnitude_spectrum, parse_channel, route_band, route_bands,
                                 route_dump, route_label, route_spectra)
from tsf.datapipe.normalization import znormalize
from tsf.datapipe.types import GRAV, GYRO, LACC
from tsf.exceptions import ConfigError, ContractError
from tsf.model_train.config import TsfConfig
from tsf.model_train.network import TsfModel, predict
from tsf.model_train.trainer import DataSplits, train
from tsf.temporal_fusion.selection import WaveletRoute

from .helpers import desk_scale_windows, random_windows, tiny_config


class NoiseInjectionTests(SimpleTestCase):
    def setUp(self):
        self.windows = random_windows(n=4, imus=2, length=64)

    def test_injected_variance_is_level_squared(self):
        for noise_kind, kind in (("grav_high", GRAV), ("gyro_low", GYRO)):
            noisy = inject_noise(self.windows, noise_kind, 0.5, np.random.default_rng(0))
            added = noisy.data - self.windows.data
            np.testing.assert_allclose(added[:, :, kind].var(axis=-1), 0.25, rtol=0.01)
            untouched = [k for k in (GRAV, GYRO, LACC) if k != kind]
            np.testing.assert_array_equal(added[:, :, untouched], 0.0)

    def test_high_and_low_frequency_character(self):
        grav = inject_noise(self.windows, "grav_high", 1.0, np.random.default_rng(1)).data - self.windows.data
        gyro = inject_noise(self.windows, "gyro_low", 1.0, np.random.default_rng(1)).data - self.windows.data
        # lag-one autocorrelation: drift is smooth, high-passed noise alternates
        def lag_one(x):
            return float(np.mean(x[..., 1:] * x[..., :-1]))
        self.assertLess(lag_one(grav[:, :, GRAV]), 0.0)
        self.assertGreater(lag_one(gyro[:, :, GYRO]), 0.5)

    def test_zero_level_leaves_windows_alone(self):
        self.assertIs(inject_noise(self.windows, "gyro_low", 0.0, np.random.default_rng(0)), self.windows)

    def test_rejects_unknown_kinds_and_negative_levels(self):
        with self.assertRaises(ConfigError):
            inject_noise(self.windows, "lacc_high", 1.0, np.random.default_rng(0))
        with self.assertRaises(ConfigError):
            inject_noise(self.windows, "grav_high", -0.1, np.random.default_rng(0))


class NoiseStudyTests(SimpleTestCase):
    def setUp(self):
        self.model = TsfModel(tiny_config(window=32))
        self.windows = random_windows(n=9, length=32)

    def test_table_layout_and_clean_baseline(self):
        table = noise_study(self.model, self.windows, levels=(0.0, 1.0), seed=0)
        self.assertEqual(list(table.columns), NOISE_COLUMNS)
        self.assertEqual(len(table), 4)
        predictions, _ = predict(self.model, self.windows)
        clean = f1_score(self.windows.labels, predictions, average="weighted")
        baseline = table[table["level"] == 0.0]
        np.testing.assert_allclose(baseline["wf1"], clean)
        self.assertTrue(((table["mean_attn_grav"] >= 0) & (table["mean_attn_grav"] <= 1)).all())

    def test_noise_study_is_seeded(self):
        first = noise_study(self.model, self.windows, levels=(2.0,), seed=4)
        second = noise_study(self.model, self.windows, levels=(2.0,), seed=4)
        np.testing.assert_array_equal(first["mean_attn_gyro"], second["mean_attn_gyro"])

    def test_attention_log_is_a_distribution_per_step(self):
        log = attention_log(self.model, self.windows)
        self.assertEqual(len(log), 32)
        np.testing.assert_allclose(log["attn_grav"] + log["attn_gyro"], 1.0)


class EdgeTests(SimpleTestCase):
    def test_two_imus_give_intra_and_inter_edges(self):
        model = TsfModel(tiny_config(imu_count=2))
        windows = random_windows(n=5, imus=2)
        edges = collect_edges(model, windows)
        # 4 nodes: 2 intra pairs and 4 inter pairs, 4 graph steps per window
        self.assertEqual(len(edges), 5 * 4 * 6)
        self.assertEqual(int((edges["edge_kind"] == "intra").sum()), 5 * 4 * 2)
        self.assertTrue((edges["i"] < edges["j"]).all())
        self.assertTrue(edges["weight"].between(-1.0, 1.0).all())

    def test_single_imu_has_no_intra_edges(self):
        edges = collect_edges(TsfModel(tiny_config()), random_windows(n=3))
        self.assertEqual(set(edges["edge_kind"]), {"inter"})

    def test_histograms_span_the_unit_interval_and_conserve_counts(self):
        model = TsfModel(tiny_config(imu_count=2))
        windows = random_windows(n=6, imus=2)
        edges = collect_edges(model, windows)
        table = edge_histograms(edges, windows, bins=10)
        self.assertAlmostEqual(table["bin_left"].min(), -1.0)
        self.assertAlmostEqual(table["bin_right"].max(), 1.0)
        for (activity, kind), group in table.groupby(["activity", "edge_kind"]):
            self.assertEqual(len(group), 10)
            label = windows.class_names.index(activity)
            expected = ((windows.labels[edges["sample_id"]] == label) & (edges["edge_kind"] == kind)).sum()
            self.assertEqual(group["count"].sum(), expected)

    def test_mlp_mode_has_no_edges(self):
        with self.assertLogs("tsf.analysis.edges", "WARNING"):
            edges = collect_edges(TsfModel(tiny_config(graph_mode="mlp")), random_windows(n=2))
        self.assertEqual(len(edges), 0)
        self.assertEqual(len(edge_histograms(edges, random_windows(n=2))), 0)

    def test_activity_filter_by_id_or_name(self):
        windows = random_windows(n=9)
        np.testing.assert_array_equal(select_activities(windows, ["1"]), [1, 4, 7])
        np.testing.assert_array_equal(select_activities(windows, ["class-2", "0"]), [0, 2, 3, 5, 6, 8])
        self.assertEqual(len(select_activities(windows, None)), 9)
        self.assertEqual(len(select_activities(windows, ["walk"])), 0)


class RouteTests(SimpleTestCase):
    def test_channel_names(self):
        self.assertEqual(parse_channel("gyro_y"), (GYRO, 1))
        self.assertEqual(parse_channel("lacc_x"), (LACC, 0))
        for bad in ("acc_x", "gyro_w", "gyro", "grav_xy"):
            with self.assertRaises(ConfigError):
                parse_channel(bad)

    def test_nominal_bands(self):
        cases = {"": (0.0, 25.0), "L": (0.0, 12.5), "H": (12.5, 25.0), "LL": (0.0, 6.25),
                 "LH": (6.25, 12.5), "HL": (18.75, 25.0), "HH": (12.5, 18.75)}
        for route, band in cases.items():
            self.assertEqual(route_band(WaveletRoute(tuple(route)), 50.0), band, route)
        self.assertEqual(route_label(WaveletRoute(())), "none")

    def test_tone_peaks_at_its_frequency(self):
        t = np.arange(100) / 50.0
        freqs, magnitude = magnitude_spectrum(np.sin(2 * np.pi * 2.0 * t), 50.0)
        self.assertEqual(freqs[magnitude.argmax()], 2.0)

    def test_spectra_group_every_window_once(self):
        windows = random_windows(n=7, length=32)
        routes = [WaveletRoute(tuple(r)) for r in ("LLL", "LLH", "LLL", "HLL", "LLH", "LLL", "HLL")]
        table = route_spectra(windows, routes, "gyro_z")
        per_route = table.groupby("route")["sample_count"].first()
        self.assertEqual(per_route.to_dict(), {"HLL": 2, "LLH": 2, "LLL": 3})
        self.assertEqual(len(table), 3 * 17)
        bands = route_bands(routes, windows.sample_rate_hz)
        self.assertEqual(bands["sample_count"].sum(), 7)
        self.assertEqual(len(route_dump(routes)), 21)
        with self.assertRaises(ConfigError):
            route_spectra(windows, routes, imu=1)


class ReportTests(SimpleTestCase):
    def test_missing_table_fails_verification(self):
        report = AnalysisReport("route_spectra", {}, {"spectra": "/nonexistent/route_spectra.csv"})
        with self.assertRaises(ContractError):
            report.verify()
        self.assertEqual(report.as_dict()["tables"], {"spectra": "/nonexistent/route_spectra.csv"})


def trained_on(windows):
    normalized, _ = znormalize(windows)
    model, _ = train(DataSplits(normalized), TsfConfig(num_classes=4, seed=0))
    return model, normalized


@tag("slow")
class TrainedModelAnalysisTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.model, cls.windows = trained_on(desk_scale_windows())

    def test_attention_moves_away_from_a_noisy_sensor(self):
        table = noise_study(self.model, self.windows, levels=(0.0, 0.5, 1.0, 2.0), seed=0)
        for noise_kind, column in (("gyro_low", "mean_attn_gyro"), ("grav_high", "mean_attn_grav")):
            rows = table[table["noise_kind"] == noise_kind]
            self.assertLess(spearmanr(rows["level"], rows[column]).statistic, 0.0, noise_kind)

    def test_low_frequency_activities_take_low_bands(self):
        routes = infer_routes(self.model, self.windows)
        low_share = np.array([route.selections.count("L") / len(route.selections) for route in routes])
        slow = self.windows.labels == self.windows.class_names.index("still")
        fast = self.windows.labels == self.windows.class_names.index("lie")
        self.assertGreaterEqual(min(slow.sum(), fast.sum()), 100)
        self.assertGreater(low_share[slow].mean(), low_share[fast].mean())


@tag("slow")
class EdgeSignTests(SimpleTestCase):
    def inter_edge_positive_mass(self, coupling: float) -> float:
        model, windows = trained_on(desk_scale_windows(coupling=coupling))
        edges = collect_edges(model, windows)
        weights = edges.loc[edges["edge_kind"] == "inter", "weight"].to_numpy()
        return float(weights.clip(min=0).sum() / np.abs(weights).sum())

    def test_correlated_modalities_learn_positive_inter_edges(self):
        self.assertGreater(self.inter_edge_positive_mass(1.0), 0.6)

    def test_anti_correlated_modalities_learn_negative_inter_edges(self):
        self.assertLess(self.inter_edge_positive_mass(-1.0), 0.4)
