import csv
import math
import os
import shutil
import tempfile
import unittest

from weak.experiment import *

STATISTICAL_RUNS = 200
STATISTICAL_WORKERS = 4


class TestExperiment(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def __cell(self, n, d, kl_corrected, log_ratio=0.5):
        return CellResult(n, d, log_ratio, kl_corrected, 0.0,
                          kl_corrected * 2, 0.0, 10, 1)

    def test_equal_diag_matrix(self):
        self.assertTrue(np.array_equal(equal_diag_matrix(3, 1.0).entries,
                                       np.eye(3)))
        cm = equal_diag_matrix(3, 0.7)
        self.assertTrue(cm.is_forward())
        self.assertAlmostEqual(cm.entries[0, 1], 0.15, places=12)
        self.assertAlmostEqual(cm.entries[2, 0], 0.15, places=12)
        self.assertRaises(SingularError, equal_diag_matrix, 3, 1.0 / 3)
        self.assertRaises(NegativeEntryError, equal_diag_matrix, 3, 1.5)

    def test_seeds(self):
        self.assertEqual(mix_seed(1, 2, 3), mix_seed(1, 2, 3))
        self.assertNotEqual(mix_seed(1, 2, 3), mix_seed(1, 3, 2))
        self.assertNotEqual(mix_seed(1, 2, 3), mix_seed(2, 2, 3))
        s = trial_seed(BASE_SEED, 1000, 0.8, 5)
        self.assertEqual(s, mix_seed(BASE_SEED, 1000, 800000000, 5))
        self.assertTrue(0 <= s < 2 ** 64)
        self.assertNotEqual(s, trial_seed(BASE_SEED, 1000, 0.7, 5))

    def test_config(self):
        cfg = SyntheticConfig()
        self.assertEqual(cfg.num_classes, 3)
        self.assertEqual(cfg.support_size, 21)
        self.assertEqual(cfg.noise_levels, NOISE_LEVELS)
        self.assertEqual(cfg.runs_per_cell, 2000)
        self.assertEqual(cfg.projection, PROJECTION_CLIP)
        self.assertTrue(cfg.backward_for(0.8).is_backward())
        self.assertAlmostEqual(cfg.log_eigen_ratio_for(0.8),
                               math.log(1.0 / 0.49), places=9)
        values = cfg.to_dict()
        self.assertEqual(values["success_params"], [0.52, 0.65, 0.08])
        self.assertEqual(values["projection"], "clip")
        self.assertIsNone(values["forward_matrix"])

    def test_config_fail_fast(self):
        self.assertRaises(SingularError, SyntheticConfig,
                          noise_levels=[0.9, 1.0 / 3])
        self.assertRaises(DimensionMismatchError, SyntheticConfig,
                          success_params=[0.5])
        self.assertRaises(ValueError, SyntheticConfig, runs_per_cell=0)
        self.assertRaises(ValueError, SyntheticConfig, base_seed=-1)
        self.assertRaises(ValueError, SyntheticConfig, success_params=[0.5,
                                                                       1.5])
        self.assertRaises(DimensionMismatchError, SyntheticConfig,
                          class_prior=DiscretePmf([0.5, 0.5]))

    def test_config_fixed_matrix(self):
        fwd = build_validated([[0.76, 0.24, 0.0],
                               [0.28, 0.72, 0.0],
                               [0.0, 0.0, 1.0]], FORWARD)
        cfg = SyntheticConfig(forward_matrix=fwd)
        self.assertEqual(len(cfg.noise_levels), 1)
        self.assertAlmostEqual(cfg.noise_levels[0], (0.76 + 0.72 + 1) / 3)
        self.assertEqual(cfg.forward_for(cfg.noise_levels[0]), fwd)
        self.assertRaises(OrientationError, SyntheticConfig,
                          forward_matrix=build_validated(np.eye(3),
                                                         BACKWARD))

    def test_generate_trial(self):
        cfg = SyntheticConfig()
        self.assertEqual(len(generate_trial(cfg, 0, 0.8, 1)), 0)
        a = generate_trial(cfg, 500, 0.8, 42)
        b = generate_trial(cfg, 500, 0.8, 42)
        self.assertEqual(a, b)
        self.assertNotEqual(a, generate_trial(cfg, 500, 0.8, 43))
        data = generate_trial(cfg, 100000, 1.0, 7)
        freq = np.array(weak_label_counts(data)) / 100000.0
        self.assertTrue(np.all(np.abs(freq - 1.0 / 3) < 0.01))
        self.assertTrue(np.all(data.xs <= 20))

    def test_noise_injection(self):
        # weak labels follow rows of forward matrix
        cfg = SyntheticConfig(success_params=[0.0, 1.0], binomial_trials=1,
                              noise_levels=[0.8])
        data = generate_trial(cfg, 100000, 0.8, 3)
        # x equals true class here
        agree = np.mean(data.xs == data.weak_labels)
        self.assertAlmostEqual(agree, 0.8, delta=0.01)

    def test_run_trial_identity(self):
        cfg = SyntheticConfig(noise_levels=[1.0])
        for t in range(5):
            r = run_trial(cfg, 10000, 1.0, t)
            self.assertEqual(r.log_eigen_ratio, 0.0)
            self.assertLess(abs(r.sum_kl_corrected - r.sum_kl_uncorrected),
                            1e-12)
            self.assertEqual(r.seed, trial_seed(cfg.base_seed, 10000, 1.0, t))

    def test_aggregate(self):
        trials = [TrialResult(10, 0.8, 0.7, v, 2 * v, 0)
                  for v in (1.0, 2.0, 3.0, 4.0)]
        cell = CellResult.aggregate(trials, 99)
        self.assertAlmostEqual(cell.mean_kl_corrected, 2.5)
        self.assertAlmostEqual(cell.std_kl_corrected, math.sqrt(1.25))
        self.assertAlmostEqual(cell.mean_kl_uncorrected, 5.0)
        self.assertEqual(cell.runs, 4)
        self.assertEqual(cell.base_seed, 99)
        reverse = CellResult.aggregate(trials[::-1], 99)
        self.assertEqual(cell.row(), reverse.row())
        self.assertRaises(ValueError, CellResult.aggregate, [], 1)

    def test_workers_do_not_change_results(self):
        cfg = SyntheticConfig(sample_sizes=[300, 1000],
                              noise_levels=[0.9, 0.7], runs_per_cell=6)
        serial = run_sweep(cfg, 1)
        parallel = run_sweep(cfg, 3)
        self.assertEqual([c.row() for c in serial],
                         [c.row() for c in parallel])
        self.assertEqual([(c.n, c.d) for c in serial],
                         [(300, 0.9), (300, 0.7), (1000, 0.9), (1000, 0.7)])
        cell = run_cell(cfg, 1000, 0.7)
        self.assertEqual(cell.row(), serial[3].row())
        a = os.path.join(self.tmp, "a.csv")
        b = os.path.join(self.tmp, "b.csv")
        write_results_csv(serial, a)
        write_results_csv(parallel, b)
        with open(a, "rb") as fa, open(b, "rb") as fb:
            self.assertEqual(fa.read(), fb.read())

    def test_write_results_csv(self):
        path = os.path.join(self.tmp, "res.csv")
        write_results_csv([], path)
        with open(path) as f:
            self.assertEqual(f.read(), ",".join(CSV_HEADER) + "\n")
        cell = CellResult(1000, 0.8, 0.713349888, 0.0123456789012, 0.001,
                          0.2, 0.01, 200, 20170101)
        write_results_csv([cell], path)
        with open(path) as f:
            rows = list(csv.reader(f))
        self.assertEqual(len(rows), 2)
        self.assertEqual(rows[0], CSV_HEADER)
        self.assertEqual(rows[1][0], "1000")
        self.assertEqual(rows[1][1], "0.8")
        self.assertEqual(rows[1][3], "0.0123456789")
        self.assertEqual(rows[1][7], "200")
        self.assertEqual(rows[1][8], "20170101")
        cfg = SyntheticConfig(sample_sizes=[100, 200, 300],
                              noise_levels=[0.9, 0.8], runs_per_cell=2)
        write_results_csv(run_sweep(cfg), path)
        with open(path) as f:
            self.assertEqual(len(list(csv.reader(f))), 1 + 3 * 2)

    def test_fit_loglog_slope(self):
        ns = [1000, 3000, 10000, 30000, 100000]
        self.assertAlmostEqual(fit_loglog_slope([(n, 3.0 / math.sqrt(n))
                                                 for n in ns]),
                               -0.5, places=9)
        self.assertAlmostEqual(fit_loglog_slope([(n, 2.0 / n) for n in ns]),
                               -1.0, places=9)
        self.assertRaises(DegenerateFitError, fit_loglog_slope,
                          [(10, 1.0), (100, 0.1)])
        self.assertRaises(DegenerateFitError, fit_loglog_slope,
                          [(10, 1.0), (10, 0.5), (10, 0.2)])
        self.assertRaises(DegenerateFitError, fit_loglog_slope,
                          [(10, 1.0), (100, 0.0), (1000, 0.2)])

    def test_pearson(self):
        self.assertAlmostEqual(pearson_correlation([1, 2, 3], [2, 4, 6]),
                               1.0)
        self.assertAlmostEqual(pearson_correlation([1, 2, 3], [3, 2, 1]),
                               -1.0)
        self.assertRaises(DegenerateFitError, pearson_correlation, [1, 1],
                          [1, 2])
        self.assertRaises(DegenerateFitError, pearson_correlation, [1, 2],
                          [1])

    def test_summarize(self):
        cells = [self.__cell(n, d, (1.0 - d + 0.1) / math.sqrt(n),
                             log_ratio=1.0 - d)
                 for n in (100, 1000, 10000) for d in (0.9, 0.8, 0.7)]
        res = summarize_sweep(cells)
        for d in (0.9, 0.8, 0.7):
            self.assertAlmostEqual(res["slopes"][d], -0.5, places=9)
        for n in (100, 1000, 10000):
            self.assertAlmostEqual(res["correlations"][n], 1.0, places=9)
        # single sample size gives no slope
        res = summarize_sweep(cells[:3])
        self.assertEqual(res["slopes"], {})

    def test_convergence_rate(self):
        cfg = SyntheticConfig(sample_sizes=[1000, 3000, 10000, 30000,
                                            100000],
                              noise_levels=[0.8],
                              runs_per_cell=STATISTICAL_RUNS)
        cells = run_sweep(cfg, STATISTICAL_WORKERS)
        means = [c.mean_kl_corrected for c in cells]
        for a, b in zip(means, means[1:]):
            self.assertLess(b, a)
        slope = fit_loglog_slope([(c.n, c.mean_kl_corrected) for c in cells])
        # at least as fast as n^-1/2, plug-in divergence itself goes as 1/n
        self.assertLess(slope, -0.35)
        self.assertGreater(slope, -1.1)

    def test_eigen_ratio_dependence(self):
        cfg = SyntheticConfig(sample_sizes=[10000],
                              noise_levels=[0.95, 0.9, 0.8, 0.7, 0.6, 0.5],
                              runs_per_cell=STATISTICAL_RUNS)
        cells = run_sweep(cfg, STATISTICAL_WORKERS)
        cells.sort(key=lambda c: c.log_eigen_ratio)
        means = [c.mean_kl_corrected for c in cells]
        for a, b in zip(means, means[1:]):
            self.assertLess(a, b)
        r = pearson_correlation([c.log_eigen_ratio for c in cells], means)
        self.assertGreater(r, 0.9)
        for c in cells:
            if c.d <= 0.9:
                self.assertLess(c.mean_kl_corrected, c.mean_kl_uncorrected)

    def test_noiseless_divergence(self):
        cfg = SyntheticConfig(sample_sizes=[10000], noise_levels=[1.0],
                              runs_per_cell=STATISTICAL_RUNS)
        cell = run_sweep(cfg, STATISTICAL_WORKERS)[0]
        self.assertLess(cell.mean_kl_corrected, 0.05)
        self.assertEqual(cell.log_eigen_ratio, 0.0)


if __name__ == '__main__':
    unittest.main()
