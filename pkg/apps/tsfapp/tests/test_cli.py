import io
import json
import tempfile
from contextlib import redirect_stderr
from pathlib import Path

import numpy as np
from django.core.management import call_command, execute_from_command_line
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from django.test.utils import iter_test_cases

from tsf.datapipe.types import WindowSet
from tsf.model_train.config import dump_config
from tsf.utils.storage import RunStore
from tsf.utils.misc.test_runner import TsfTestRunner

from .helpers import tiny_config

SYNTH_ARGS = ["--subjects", "2", "--trials", "1", "--duration", "8", "--window", "64", "--overlap", "32"]


def tsf(*args) -> str:
    out = io.StringIO()
    call_command("tsf", *[str(a) for a in args], stdout=out)
    return out.getvalue()


class CliTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def synth(self, name: str = "data", seed: int = 3) -> Path:
        out_dir = self.root / name
        tsf("synth", "--out-dir", out_dir, "--seed", seed, *SYNTH_ARGS)
        return out_dir

    def config_file(self, **overrides) -> Path:
        return dump_config(tiny_config(epochs=1, **overrides), self.root / "tsf.env")


class SynthCommandTests(CliTestCase):
    def test_writes_dataset_files(self):
        data = self.synth()
        for name in ("recordings.csv", "manifest.env", "windows.npz", "norm_stats.json"):
            self.assertTrue((data / name).is_file(), name)
        windows = WindowSet.load(data / "windows.npz")
        # 8 s at 50 Hz, window 64 hop 32: 11 windows per recording, 2 subjects x 4 classes
        self.assertEqual(len(windows), 88)
        self.assertEqual(windows.class_names, ["still", "walk", "run", "lie"])
        np.testing.assert_allclose(windows.data.mean(axis=(0, 1, 3, 4)), 0.0, atol=1e-9)

    def test_same_seed_same_bytes(self):
        first, second = self.synth("a"), self.synth("b")
        for name in ("recordings.csv", "manifest.env", "norm_stats.json"):
            self.assertEqual((first / name).read_bytes(), (second / name).read_bytes(), name)
        np.testing.assert_array_equal(WindowSet.load(first / "windows.npz").data,
                                      WindowSet.load(second / "windows.npz").data)
        other = self.synth("c", seed=4)
        self.assertNotEqual((first / "recordings.csv").read_bytes(), (other / "recordings.csv").read_bytes())

    def test_preprocess_recovers_the_windows(self):
        data = self.synth()
        output = tsf("preprocess", "--input", data / "recordings.csv", "--out-dir", self.root / "pre")
        self.assertIn("88 windows", output)
        windows = WindowSet.load(self.root / "pre" / "windows.npz")
        reference = WindowSet.load(data / "windows.npz")
        self.assertEqual(windows.data.shape, reference.data.shape)
        np.testing.assert_array_equal(np.bincount(windows.labels), np.bincount(reference.labels))


class ModelCommandTests(CliTestCase):
    def setUp(self):
        super().setUp()
        self.data = self.synth()
        self.windows = self.data / "windows.npz"
        self.run_dir = self.root / "run"
        tsf("train", "--config", self.config_file(), "--windows", self.windows, "--out-dir", self.run_dir)
        self.model = self.run_dir / "model.npz"

    def test_train_outputs(self):
        for name in ("model.npz", "fold_report.json", "confusion.csv"):
            self.assertTrue((self.run_dir / name).is_file(), name)
        report = json.loads((self.run_dir / "fold_report.json").read_text())
        self.assertEqual(report["fold_id"], "train")
        self.assertEqual(len(report["curve"]), 1)
        self.assertGreater(report["flops"], 0)

    def test_eval(self):
        output = tsf("eval", "--model", self.model, "--windows", self.windows, "--out-dir", self.root / "eval")
        self.assertIn("macro F1", output)
        report = json.loads((self.root / "eval" / "eval_report.json").read_text())
        self.assertEqual(sum(c["support"] for c in report["per_class"]), 88)

    def test_analyses(self):
        out_dir = self.root / "analysis"
        common = ["--model", self.model, "--windows", self.windows, "--out-dir", out_dir]
        tsf("analyze-noise", *common, "--levels", "0", "1")
        tsf("analyze-edges", *common, "--activity", "walk", "--bins", "8")
        tsf("analyze-routes", *common, "--channel", "gyro_x")
        for name in ("noise_attention.csv", "attention_log.csv", "edge_histograms.csv", "edges.csv",
                     "route_spectra.csv", "route_bands.csv", "routes.csv"):
            self.assertTrue((out_dir / name).is_file(), name)
        for kind in ("noise_attention", "edge_histograms", "route_spectra"):
            report = json.loads((out_dir / f"{kind}.json").read_text())
            self.assertEqual(report["kind"], kind)
        self.assertEqual(json.loads((out_dir / "edge_histograms.json").read_text())["parameters"]["activities"],
                         ["walk"])

    def test_analysis_tables_reparse_byte_identically(self):
        out_dir = self.root / "analysis"
        common = ["--model", self.model, "--windows", self.windows, "--out-dir", out_dir]
        tsf("analyze-noise", *common, "--levels", "0", "0.5", "2")
        tsf("analyze-edges", *common)
        tsf("analyze-routes", *common)
        again = RunStore(self.root / "again")
        tables = sorted(out_dir.glob("*.csv"))
        self.assertEqual(len(tables), 7)
        for path in tables:
            copy = again.write_table(path.name, RunStore.read_table(path))
            self.assertEqual(copy.read_bytes(), path.read_bytes(), path.name)

    def test_unknown_activity(self):
        with self.assertLogs(level="ERROR"), self.assertRaisesMessage(CommandError, "contract: no windows match"):
            tsf("analyze-edges", "--model", self.model, "--windows", self.windows, "--activity", "swim",
                "--out-dir", self.root / "analysis")


class CrossValidationCommandTests(CliTestCase):
    def test_loso_writes_fold_reports(self):
        data = self.synth()
        out_dir = self.root / "cv"
        output = tsf("loso", "--config", self.config_file(), "--windows", data / "windows.npz", "--runs", "1",
                     "--out-dir", out_dir)
        self.assertIn("loso: macro F1", output)
        self.assertEqual(sorted(p.name for p in (out_dir / "folds").glob("*.json")),
                         ["run-0-subject-0.json", "run-0-subject-1.json"])
        summary = json.loads((out_dir / "cv_summary.json").read_text())
        self.assertEqual((summary["protocol"], summary["runs"], summary["folds"]), ("loso", 1, 2))

    def test_loso_on_three_subjects(self):
        data = self.root / "three"
        args = [a if a != "2" else "3" for a in SYNTH_ARGS]
        tsf("synth", "--out-dir", data, "--seed", 5, *args)
        out_dir = self.root / "cv3"
        tsf("loso", "--config", self.config_file(), "--windows", data / "windows.npz", "--runs", "1",
            "--out-dir", out_dir)
        reports = sorted((out_dir / "folds").glob("*.json"))
        self.assertEqual([p.name for p in reports],
                         ["run-0-subject-0.json", "run-0-subject-1.json", "run-0-subject-2.json"])
        for path in reports:
            report = json.loads(path.read_text())
            self.assertEqual(sum(c["support"] for c in report["per_class"]), 44)
        summary = json.loads((out_dir / "cv_summary.json").read_text())
        self.assertEqual((summary["runs"], summary["folds"]), (1, 3))


class ErrorHandlingTests(CliTestCase):
    def test_missing_model_file(self):
        with self.assertLogs(level="ERROR"), self.assertRaises(CommandError) as caught:
            tsf("eval", "--model", self.root / "missing.npz", "--windows", self.root / "missing.npz",
                "--out-dir", self.root)
        self.assertTrue(str(caught.exception).startswith("model-file: "))
        self.assertEqual(caught.exception.returncode, 1)

    def test_invalid_config_file(self):
        data = self.synth()
        bad = self.root / "bad.env"
        bad.write_text("EPOCHS=0\n")
        with self.assertLogs(level="ERROR"), self.assertRaisesMessage(CommandError, "config: "):
            tsf("train", "--config", bad, "--windows", data / "windows.npz", "--out-dir", self.root)

    def test_malformed_rename(self):
        data = self.synth()
        with self.assertLogs(level="ERROR"), self.assertRaisesMessage(CommandError, "--rename expects OLD=NEW"):
            tsf("preprocess", "--input", data / "recordings.csv", "--rename", "acc_x", "--out-dir", self.root)

    def test_train_requires_a_config_file(self):
        with self.assertRaisesMessage(CommandError, "--config"):
            tsf("train", "--windows", self.root / "windows.npz")
        with redirect_stderr(io.StringIO()) as stderr, self.assertRaises(SystemExit) as caught:
            execute_from_command_line(["manage.py", "tsf", "train", "--windows", str(self.root / "windows.npz")])
        self.assertEqual(caught.exception.code, 2)
        self.assertIn("--config", stderr.getvalue())

    def test_unknown_subcommand(self):
        with self.assertRaises(CommandError):
            tsf("fit")


class TestRunnerTests(SimpleTestCase):
    def test_bare_test_command_discovers_the_app_suite(self):
        suite = TsfTestRunner(verbosity=0).build_suite()
        ids = {test.id() for test in iter_test_cases(suite)}
        self.assertIn(f"{__name__}.TestRunnerTests.test_bare_test_command_discovers_the_app_suite", ids)
        self.assertTrue(any(i.startswith("apps.tsfapp.tests.test_graph_fusion.") for i in ids))
