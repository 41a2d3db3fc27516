from __future__ import division
import logging

import numpy as np
from scipy.stats import binom

from weak.config import *
from weak.enums import *
from weak.errors import *
from weak.confusion import invert


class DiscretePmf(object):
    """ Probability mass function over finite support 0..S-1.
        Round-off negatives down to -PMF_TOLERANCE are stored as zeros.
    """
    def __init__(self, masses):
        """ Create and validate pmf.
        :param masses: sequence of probabilities which sums to one.
        """
        m = np.array(masses, dtype=float).ravel()
        if m.size == 0:
            raise DimensionMismatchError("pmf support is empty")
        if not np.all(np.isfinite(m)):
            raise NegativeEntryError("pmf has non finite masses")
        if np.any(m < -PMF_TOLERANCE):
            a = int(np.argmin(m))
            raise NegativeEntryError("pmf mass at {} is negative: {!r}"
                                     .format(a, float(m[a])))
        total = m.sum()
        if abs(total - 1.0) > PMF_TOLERANCE:
            raise NonStochasticError("pmf sums to {!r}, expected 1"
                                     .format(float(total)))
        m = np.maximum(m, 0.0)
        m.setflags(write=False)
        self._masses = m

    @property
    def masses(self):
        return self._masses

    @property
    def values(self):
        return self._masses

    @property
    def support_size(self):
        return self._masses.size

    def tolist(self):
        return self._masses.tolist()

    def __len__(self):
        return self._masses.size

    def __eq__(self, other):
        return isinstance(other, DiscretePmf) \
               and np.array_equal(self._masses, other._masses)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __str__(self):
        return "pmf(" + ", ".join("{:.6g}".format(v)
                                  for v in self._masses) + ")"


class SignedMeasure(object):
    """ Output of noise correction. Values sum to one but some of them may be
        negative, use project_to_pmf() to get proper pmf.
    """
    def __init__(self, values, tolerance=PMF_TOLERANCE):
        v = np.array(values, dtype=float).ravel()
        if v.size == 0:
            raise DimensionMismatchError("measure support is empty")
        if not np.all(np.isfinite(v)):
            raise NegativeEntryError("measure has non finite values")
        total = v.sum()
        if abs(total - 1.0) > tolerance:
            raise NonStochasticError("measure sums to {!r}, expected 1"
                                     .format(float(total)))
        v.setflags(write=False)
        self._values = v

    @property
    def values(self):
        return self._values

    @property
    def support_size(self):
        return self._values.size

    def is_nonnegative(self):
        return bool(np.all(self._values >= 0.0))

    def negative_mass(self):
        """ Total mass of negative values, zero or negative number.
        """
        return float(self._values[self._values < 0.0].sum())

    def tolist(self):
        return self._values.tolist()

    def __len__(self):
        return self._values.size

    def __str__(self):
        return "measure(" + ", ".join("{:.6g}".format(v)
                                      for v in self._values) + ")"


class WeakDataset(object):
    """ Training evidence: pairs of feature symbol and weak label.
    """
    def __init__(self, xs, weak_labels, support_size, num_classes):
        """ Create dataset.
        :param xs: sequence with symbol index of each sample in [0, S).
        :param weak_labels: sequence with weak label of each sample in [0, K).
        :param support_size: S.
        :param num_classes: K.
        """
        xs = np.array(xs, dtype=np.int64).ravel()
        labels = np.array(weak_labels, dtype=np.int64).ravel()
        if xs.size != labels.size:
            raise DimensionMismatchError("{} symbols but {} labels"
                                         .format(xs.size, labels.size))
        if support_size < 1 or num_classes < 1:
            raise DimensionMismatchError("support size and number of classes "
                                         "must be positive")
        if xs.size and (xs.min() < 0 or xs.max() >= support_size):
            raise DimensionMismatchError("symbol index out of [0, {})"
                                         .format(support_size))
        if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
            raise DimensionMismatchError("weak label out of [0, {})"
                                         .format(num_classes))
        xs.setflags(write=False)
        labels.setflags(write=False)
        self._xs = xs
        self._labels = labels
        self.support_size = support_size
        self.num_classes = num_classes

    @staticmethod
    def from_pairs(pairs, support_size, num_classes):
        """ Create dataset from (x, weak label) pairs.
        """
        pairs = list(pairs)
        xs = [p[0] for p in pairs]
        labels = [p[1] for p in pairs]
        return WeakDataset(xs, labels, support_size, num_classes)

    @property
    def xs(self):
        return self._xs

    @property
    def weak_labels(self):
        return self._labels

    @property
    def samples(self):
        """ List of (x, weak label) tuples.
        """
        return list(zip(self._xs.tolist(), self._labels.tolist()))

    def __len__(self):
        return self._xs.size

    def __eq__(self, other):
        return isinstance(other, WeakDataset) \
               and self.support_size == other.support_size \
               and self.num_classes == other.num_classes \
               and np.array_equal(self._xs, other._xs) \
               and np.array_equal(self._labels, other._labels)

    def __ne__(self, other):
        return not self.__eq__(other)


def _check_backward(backward, count):
    if not backward.is_backward():
        raise OrientationError("backward matrix expected, got {}"
                               .format(backward.orientation))
    if backward.num_classes != count:
        raise DimensionMismatchError("{} densities for {} classes"
                                     .format(count, backward.num_classes))


def _stack(measures):
    """ Put measures into S x K matrix, one column per measure.
    """
    sizes = set(m.support_size for m in measures)
    if len(sizes) != 1:
        raise DimensionMismatchError("measures have different supports: {}"
                                     .format(sorted(sizes)))
    return np.column_stack([m.values for m in measures])


def counts_table(data):
    """ Count samples in each (weak label, symbol) cell.
    :param data: WeakDataset.
    :return: K x S numpy array.
    """
    k, s = data.num_classes, data.support_size
    cells = np.bincount(data.weak_labels * s + data.xs, minlength=k * s)
    return cells.reshape(k, s).astype(float)


def weak_label_counts(data):
    """ Number of samples for each weak label.
    :param data: WeakDataset.
    :return: list of K integers.
    """
    return np.bincount(data.weak_labels,
                       minlength=data.num_classes).tolist()


def empirical_conditionals(data, smoothing=SMOOTHING, empty_as_uniform=False):
    """ Estimate q(x|weak y=j) by counting with additive smoothing:
            q(a|j) = (count(a, j) + smoothing) / (n_j + S * smoothing)
    :param data: WeakDataset.
    :param smoothing: pseudo count for each cell, non negative.
    :param empty_as_uniform: return uniform pmf for weak label without
                             samples instead of raising error. Useful when
                             such label carries no weight later.
    :return: list of K DiscretePmf.
    """
    if smoothing < 0:
        raise ValueError("smoothing must be non negative, got {}"
                         .format(smoothing))
    counts = counts_table(data)
    s = data.support_size
    res = []
    for j in range(data.num_classes):
        n_j = counts[j].sum()
        if n_j == 0 and smoothing == 0:
            if not empty_as_uniform:
                raise EmptyWeakClassError("weak label {} has no samples"
                                          .format(j))
            res.append(DiscretePmf(np.full(s, 1.0 / s)))
            continue
        res.append(DiscretePmf((counts[j] + smoothing)
                               / (n_j + s * smoothing)))
    return res


def mix_densities(true_pmfs, backward):
    """ Generative mixing by annotation noise:
            p(x|weak y=j) = sum_i p(x|y=i) * Pr(y=i|weak y=j)
    :param true_pmfs: list of K DiscretePmf, class conditionals.
    :param backward: backward ConfusionMatrix.
    :return: list of K DiscretePmf, weak label conditionals.
    """
    _check_backward(backward, len(true_pmfs))
    mixed = _stack(true_pmfs).dot(backward.entries)
    return [DiscretePmf(mixed[:, j]) for j in range(mixed.shape[1])]


def correct_densities(weak_pmfs, backward):
    """ Noise corrected estimator of class conditionals:
            q(x|y=i) = sum_j q(x|weak y=j) * inv(PI)(j, i)
    :param weak_pmfs: list of K DiscretePmf with q(x|weak y=j).
    :param backward: backward ConfusionMatrix PI.
    :return: list of K SignedMeasure.
    """
    _check_backward(backward, len(weak_pmfs))
    corrected = _stack(weak_pmfs).dot(invert(backward))
    res = []
    for i in range(corrected.shape[1]):
        sm = SignedMeasure(corrected[:, i])
        if not sm.is_nonnegative():
            logging.debug("Corrected density of class {} has negative mass "
                          "{:.3g}".format(i, sm.negative_mass()))
        res.append(sm)
    return res


def _simplex(v):
    """ Euclidean projection onto probability simplex by sorting.
    """
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.count_nonzero(u - cssv / ind > 0)
    theta = cssv[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def project_to_pmf(measure, method=PROJECTION_CLIP):
    """ Map signed measure to probability mass function.
        PROJECTION_CLIP sets negatives to zero and renormalizes,
        PROJECTION_SIMPLEX finds nearest point of simplex in L2 sense.
        Nonnegative input is returned unchanged by both methods.
    :param measure: SignedMeasure or DiscretePmf.
    :param method: Projection enum.
    :return: DiscretePmf.
    """
    v = np.asarray(measure.values, dtype=float)
    total = v.sum()
    if abs(total - 1.0) > PROJECTION_TOLERANCE:
        raise NonStochasticError("measure sums to {!r}, can not project"
                                 .format(float(total)))
    if method == PROJECTION_CLIP:
        clipped = np.maximum(v, 0.0)
        mass = clipped.sum()
        if mass <= 0.0:
            raise AllNonPositiveError("measure has no positive mass")
        return DiscretePmf(clipped / mass)
    elif method == PROJECTION_SIMPLEX:
        return DiscretePmf(_simplex(v))
    raise ValueError("unknown projection {}".format(method))


def correct_posterior(weak_posterior, forward):
    """ Correct posterior over weak labels into posterior over classes:
            p(y|x) = p(weak y|x) * inv(PI_R)
        where PI_R is forward matrix with Pr(weak y=j|y=i) in (i, j).
    :param weak_posterior: DiscretePmf over K weak labels.
    :param forward: forward ConfusionMatrix.
    :return: SignedMeasure over K classes.
    """
    if not forward.is_forward():
        raise OrientationError("forward matrix expected, got {}"
                               .format(forward.orientation))
    if weak_posterior.support_size != forward.num_classes:
        raise DimensionMismatchError("posterior over {} labels, matrix has {}"
                                     .format(weak_posterior.support_size,
                                             forward.num_classes))
    return SignedMeasure(np.dot(weak_posterior.values, invert(forward)))


def kl_divergence(p, q):
    """ Kullback-Leibler divergence D(p || q) in nats. Estimated masses are
        floored with KL_FLOOR, zero masses of p contribute nothing.
    :param p: DiscretePmf, true distribution.
    :param q: DiscretePmf, estimated distribution.
    :return: divergence.
    """
    if p.support_size != q.support_size:
        raise DimensionMismatchError("supports {} and {} differ"
                                     .format(p.support_size, q.support_size))
    pv = p.values
    qv = np.maximum(q.values, KL_FLOOR)
    nz = pv > 0.0
    res = float(np.sum(pv[nz] * np.log(pv[nz] / qv[nz])))
    if res > KL_FLOOR_DOMINATED_NATS:
        logging.warning("KL divergence {:.4g} nats is dominated by "
                        "probability floor {}".format(res, KL_FLOOR))
    return res


def sum_kl(true_pmfs, est_pmfs):
    """ Sum of per class KL divergences between true and estimated pmfs.
    """
    if len(true_pmfs) != len(est_pmfs):
        raise DimensionMismatchError("{} true pmfs and {} estimates"
                                     .format(len(true_pmfs), len(est_pmfs)))
    return float(sum(kl_divergence(p, q) for p, q in zip(true_pmfs,
                                                         est_pmfs)))


def binomial_pmf(trials, success):
    """ Binomial distribution over 0..trials.
    :param trials: number of trials, at least 1.
    :param success: success probability in [0, 1].
    :return: DiscretePmf with support trials + 1.
    """
    if int(trials) != trials or trials < 1:
        raise ValueError("trials must be positive integer, got {}"
                         .format(trials))
    if not 0.0 <= success <= 1.0:
        raise ValueError("success must be in [0, 1], got {}".format(success))
    return DiscretePmf(binom.pmf(np.arange(int(trials) + 1), int(trials),
                                 success))
