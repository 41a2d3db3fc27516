""" Synthetic convergence study. Binomial classes are annotated through
    equal diagonal noise, class conditionals are recovered with the noise
    corrected estimator and compared with analytic truth by sum of KL
    divergences. Every trial has its own seed derived from the base seed,
    sample size, noise level and trial number, so results don't depend on
    worker count or scheduling.
"""

from __future__ import division
import csv
import functools
import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from weak.config import *
from weak.enums import *
from weak.errors import *
from weak.confusion import *
from weak.density import *
from weak.csvio import format_value

CSV_HEADER = ["n", "d", "log_eigen_ratio", "mean_kl_corrected",
              "std_kl_corrected", "mean_kl_uncorrected",
              "std_kl_uncorrected", "runs", "base_seed"]
UINT64_MASK = (1 << 64) - 1


def equal_diag_matrix(num_classes, d):
    """ Forward matrix with diagonal d and (1 - d) / (K - 1) elsewhere.
        Matrix is symmetric and doubly stochastic, singular for d = 1 / K.
    :param num_classes: K.
    :param d: diagonal in [0, 1].
    :return: forward ConfusionMatrix.
    """
    if not 0.0 <= d <= 1.0:
        raise NegativeEntryError("diagonal {} is out of [0, 1]".format(d))
    off = (1.0 - d) / (num_classes - 1)
    m = np.full((num_classes, num_classes), off)
    np.fill_diagonal(m, d)
    return ConfusionMatrix(m, FORWARD)


def mix_seed(base_seed, *keys):
    """ Derive independent 64 bit seed. Base seed and keys are hashed with
        numpy SeedSequence([base_seed, key1, key2, ...]), first 64 bit word of
        generated state is the result.
    :param base_seed: non negative integer.
    :param keys: non negative integers.
    :return: integer in [0, 2^64).
    """
    entropy = [int(base_seed) & UINT64_MASK] + [int(k) for k in keys]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def trial_seed(base_seed, n, d, t):
    """ Seed of trial t in cell (n, d). Noise level is encoded as
        round(d * 1e9).
    """
    return mix_seed(base_seed, n, int(round(d * 1e9)), t)


class SyntheticConfig(object):
    """ Configuration of the synthetic study, validated on construction.
    """
    def __init__(self, binomial_trials=BINOMIAL_TRIALS,
                 success_params=None, class_prior=None, forward_matrix=None,
                 sample_sizes=None, noise_levels=None,
                 runs_per_cell=RUNS_PER_CELL, base_seed=BASE_SEED,
                 smoothing=SMOOTHING, projection=None):
        """ Create config, None means default value from weak.config.
        :param binomial_trials: m, support size is m + 1.
        :param success_params: list with binomial parameter of each class.
        :param class_prior: DiscretePmf, uniform if None.
        :param forward_matrix: fixed forward ConfusionMatrix, if specified
                               it replaces equal diagonal noise levels.
        :param sample_sizes: list of sample sizes.
        :param noise_levels: list of diagonal values.
        :param runs_per_cell: trials for each (n, d) cell.
        :param base_seed: non negative integer.
        :param smoothing: pseudo count of empirical conditionals.
        :param projection: Projection enum.
        """
        if success_params is None:
            success_params = SUCCESS_PARAMS
        if sample_sizes is None:
            sample_sizes = SAMPLE_SIZES
        if noise_levels is None:
            noise_levels = NOISE_LEVELS
        if projection is None:
            projection = from_name(PROJECTIONS, PROJECTION)
        self.binomial_trials = int(binomial_trials)
        self.success_params = [float(p) for p in success_params]
        k = len(self.success_params)
        if k < 2:
            raise DimensionMismatchError("at least 2 classes required, got {}"
                                         .format(k))
        if class_prior is None:
            class_prior = DiscretePmf(np.full(k, 1.0 / k))
        if class_prior.support_size != k:
            raise DimensionMismatchError("class prior over {} classes, {} "
                                         "success params"
                                         .format(class_prior.support_size, k))
        self.class_prior = class_prior
        self.forward_matrix = forward_matrix
        if forward_matrix is not None:
            if not forward_matrix.is_forward():
                raise OrientationError("noise matrix must be forward")
            if forward_matrix.num_classes != k:
                raise DimensionMismatchError("noise matrix has {} classes, {} "
                                             "success params"
                                             .format(forward_matrix
                                                     .num_classes, k))
            noise_levels = [float(np.mean(np.diag(forward_matrix.entries)))]
        self.sample_sizes = [int(n) for n in sample_sizes]
        if any(n < 0 for n in self.sample_sizes):
            raise ValueError("sample sizes must be non negative")
        self.noise_levels = [float(d) for d in noise_levels]
        self.runs_per_cell = int(runs_per_cell)
        if self.runs_per_cell < 1:
            raise ValueError("runs_per_cell must be positive")
        self.base_seed = int(base_seed)
        if self.base_seed < 0:
            raise ValueError("base_seed must be non negative")
        self.smoothing = float(smoothing)
        if self.smoothing < 0:
            raise ValueError("smoothing must be non negative")
        self.projection = projection
        # fail fast on bad parameters, before any trial runs
        self.truths = [binomial_pmf(self.binomial_trials, p)
                       for p in self.success_params]
        self._backward = {}
        self._log_ratio = {}
        for d in self.noise_levels:
            self._backward[d] = backward_from_forward(self.forward_for(d),
                                                      self.class_prior)

    @property
    def num_classes(self):
        return len(self.success_params)

    @property
    def support_size(self):
        return self.binomial_trials + 1

    def forward_for(self, d):
        """ Forward noise matrix of noise level d.
        """
        if self.forward_matrix is not None:
            return self.forward_matrix
        return equal_diag_matrix(self.num_classes, d)

    def backward_for(self, d):
        """ Backward matrix used for correction at noise level d.
        """
        if d not in self._backward:
            self._backward[d] = backward_from_forward(self.forward_for(d),
                                                      self.class_prior)
        return self._backward[d]

    def log_eigen_ratio_for(self, d):
        """ Log eigen ratio of backward matrix at noise level d.
        """
        if d not in self._log_ratio:
            diag = diagnostics(self.backward_for(d))
            self._log_ratio[d] = diag.log_eigen_ratio
        return self._log_ratio[d]

    def to_dict(self):
        """ Plain dict with all values, as in config file.
        """
        return {"binomial_trials": self.binomial_trials,
                "success_params": list(self.success_params),
                "class_prior": self.class_prior.tolist(),
                "forward_matrix": None if self.forward_matrix is None
                else self.forward_matrix.tolist(),
                "sample_sizes": list(self.sample_sizes),
                "noise_levels": list(self.noise_levels),
                "runs_per_cell": self.runs_per_cell,
                "base_seed": self.base_seed,
                "smoothing": self.smoothing,
                "projection": str(self.projection)}


class TrialResult(object):
    """ Outcome of single Monte Carlo trial.
    """
    def __init__(self, n, d, log_eigen_ratio, sum_kl_corrected,
                 sum_kl_uncorrected, seed):
        self.n = n
        self.d = d
        self.log_eigen_ratio = log_eigen_ratio
        self.sum_kl_corrected = sum_kl_corrected
        self.sum_kl_uncorrected = sum_kl_uncorrected
        self.seed = seed


class CellResult(object):
    """ Aggregated trials of one (n, d) cell. Standard deviations are
        population ones.
    """
    def __init__(self, n, d, log_eigen_ratio, mean_kl_corrected,
                 std_kl_corrected, mean_kl_uncorrected, std_kl_uncorrected,
                 runs, base_seed):
        self.n = n
        self.d = d
        self.log_eigen_ratio = log_eigen_ratio
        self.mean_kl_corrected = mean_kl_corrected
        self.std_kl_corrected = std_kl_corrected
        self.mean_kl_uncorrected = mean_kl_uncorrected
        self.std_kl_uncorrected = std_kl_uncorrected
        self.runs = runs
        self.base_seed = base_seed

    @staticmethod
    def aggregate(trials, base_seed):
        """ Make cell result from trials of the same cell. Sums are exact,
            so the result doesn't depend on order of trials.
        """
        if not trials:
            raise ValueError("no trials to aggregate")
        mc, sc = _mean_std([t.sum_kl_corrected for t in trials])
        mu, su = _mean_std([t.sum_kl_uncorrected for t in trials])
        first = trials[0]
        return CellResult(first.n, first.d, first.log_eigen_ratio, mc, sc,
                          mu, su, len(trials), base_seed)

    def row(self):
        """ Values in CSV_HEADER order.
        """
        return [self.n, self.d, self.log_eigen_ratio, self.mean_kl_corrected,
                self.std_kl_corrected, self.mean_kl_uncorrected,
                self.std_kl_uncorrected, self.runs, self.base_seed]

    def __str__(self):
        return "n={} d={:.4g} log_ratio={:.4g} kl_corrected={:.4g}+-{:.3g} " \
               "kl_uncorrected={:.4g}+-{:.3g}" \
            .format(self.n, self.d, self.log_eigen_ratio,
                    self.mean_kl_corrected, self.std_kl_corrected,
                    self.mean_kl_uncorrected, self.std_kl_uncorrected)


def _mean_std(values):
    mean = math.fsum(values) / len(values)
    var = math.fsum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


def generate_trial(cfg, n, d, seed):
    """ Draw n samples: y from class prior, x from binomial of class y, weak
        label from row y of forward noise matrix.
    :param cfg: SyntheticConfig.
    :param n: number of samples.
    :param d: noise level.
    :param seed: integer seed.
    :return: WeakDataset.
    """
    rng = np.random.default_rng(seed)
    k = cfg.num_classes
    y = rng.choice(k, size=n, p=cfg.class_prior.masses)
    x = rng.binomial(cfg.binomial_trials, np.asarray(cfg.success_params)[y])
    cdf = np.cumsum(cfg.forward_for(d).entries, axis=1)
    u = rng.random(n)
    weak = np.minimum((u[:, np.newaxis] >= cdf[y]).sum(axis=1), k - 1)
    return WeakDataset(x, weak, cfg.support_size, k)


def run_trial(cfg, n, d, t):
    """ Run trial t of cell (n, d).
    :return: TrialResult.
    """
    seed = trial_seed(cfg.base_seed, n, d, t)
    data = generate_trial(cfg, n, d, seed)
    weak = empirical_conditionals(data, cfg.smoothing)
    backward = cfg.backward_for(d)
    corrected = [project_to_pmf(sm, cfg.projection)
                 for sm in correct_densities(weak, backward)]
    return TrialResult(n, d, cfg.log_eigen_ratio_for(d),
                       sum_kl(cfg.truths, corrected),
                       sum_kl(cfg.truths, weak), seed)


def _run_task(cfg, task):
    n, d, t = task
    return run_trial(cfg, n, d, t)


def _run_tasks(cfg, tasks, workers):
    if workers is None or workers <= 1 or len(tasks) < 2:
        return [_run_task(cfg, task) for task in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(functools.partial(_run_task, cfg), tasks,
                                 chunksize=chunk))


def run_cell(cfg, n, d, workers=1):
    """ Run all trials of cell (n, d).
    :param cfg: SyntheticConfig.
    :param n: sample size.
    :param d: noise level.
    :param workers: number of worker processes.
    :return: CellResult.
    """
    tasks = [(n, d, t) for t in range(cfg.runs_per_cell)]
    res = CellResult.aggregate(_run_tasks(cfg, tasks, workers),
                               cfg.base_seed)
    logging.info("Cell {}".format(res))
    return res


def run_sweep(cfg, workers=1):
    """ Run every (n, d) cell of config, sample size major order.
    :param cfg: SyntheticConfig.
    :param workers: number of worker processes.
    :return: list of CellResult.
    """
    cells = [(n, d) for n in cfg.sample_sizes for d in cfg.noise_levels]
    tasks = [(n, d, t) for n, d in cells for t in range(cfg.runs_per_cell)]
    logging.info("Running {} cells, {} trials on {} workers"
                 .format(len(cells), len(tasks), workers))
    trials = _run_tasks(cfg, tasks, workers)
    res = []
    r = cfg.runs_per_cell
    for i in range(len(cells)):
        cell = CellResult.aggregate(trials[i * r:(i + 1) * r], cfg.base_seed)
        logging.info("Cell {}".format(cell))
        res.append(cell)
    return res


def fit_loglog_slope(points):
    """ Least squares slope of log(mean divergence) against log(n).
    :param points: list of (n, mean divergence), at least 3 positive pairs.
    :return: slope.
    """
    if len(points) < 3:
        raise DegenerateFitError("at least 3 points required, got {}"
                                 .format(len(points)))
    ns = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if np.any(ns <= 0) or np.any(ys <= 0):
        raise DegenerateFitError("log-log fit needs positive values")
    if np.all(ns == ns[0]):
        raise DegenerateFitError("all sample sizes are equal to {}"
                                 .format(ns[0]))
    return float(np.polyfit(np.log(ns), np.log(ys), 1)[0])


def pearson_correlation(xs, ys):
    """ Pearson correlation coefficient of two sequences.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size != ys.size or xs.size < 2:
        raise DegenerateFitError("need two equally long sequences")
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        raise DegenerateFitError("sequence without spread")
    return float(np.corrcoef(xs, ys)[0, 1])


def summarize_sweep(cells):
    """ Log convergence slope for each noise level and correlation with log
        eigen ratio for each sample size.
    :param cells: list of CellResult.
    :return: dict with "slopes" by d and "correlations" by n.
    """
    slopes = {}
    correlations = {}
    for d in sorted(set(c.d for c in cells)):
        row = [(c.n, c.mean_kl_corrected) for c in cells if c.d == d]
        try:
            slopes[d] = fit_loglog_slope(row)
        except DegenerateFitError:
            continue
        logging.info("d={:.4g}: log-log slope {:.4f}".format(d, slopes[d]))
    for n in sorted(set(c.n for c in cells)):
        row = [c for c in cells if c.n == n]
        try:
            correlations[n] = pearson_correlation(
                [c.log_eigen_ratio for c in row],
                [c.mean_kl_corrected for c in row])
        except DegenerateFitError:
            continue
        logging.info("n={}: correlation with log eigen ratio {:.4f}"
                     .format(n, correlations[n]))
    return {"slopes": slopes, "correlations": correlations}


def write_results_csv(rows, path):
    """ Write aggregated cells to CSV file, 9 significant digits.
    :param rows: list of CellResult.
    :param path: output file path.
    """
    with open(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow([format_value(v) for v in r.row()])
    logging.info("{} rows written to {}".format(len(rows), path))
