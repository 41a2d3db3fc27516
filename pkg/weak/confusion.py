from __future__ import division
import math
import logging

import numpy as np

from weak.config import *
from weak.enums import *
from weak.errors import *


class ConfusionMatrix(object):
    """ K x K stochastic matrix which describes annotation noise.
        Backward matrix keeps Pr(y=i|weak y=j) in (i, j), columns sum to one.
        Forward matrix keeps Pr(weak y=j|y=i) in (i, j), rows sum to one.
        Object is immutable and validated on construction.
    """
    def __init__(self, entries, orientation):
        """ Create and validate matrix.
        :param entries: square matrix as nested lists or numpy array.
        :param orientation: BACKWARD or FORWARD.
        """
        if orientation not in ORIENTATIONS:
            raise OrientationError("unknown orientation {}".format(orientation))
        try:
            m = np.array(entries, dtype=float)
        except (TypeError, ValueError):
            raise NegativeEntryError("matrix entries are not numbers")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError("matrix is not square, shape {}"
                                         .format(m.shape))
        if m.shape[0] < 2:
            raise DimensionMismatchError("matrix needs at least 2 classes, "
                                         "got {}".format(m.shape[0]))
        if not np.all(np.isfinite(m)):
            raise NegativeEntryError("matrix has non finite entries")
        if np.any(m < 0.0):
            i, j = np.argwhere(m < 0.0)[0]
            raise NegativeEntryError("entry ({}, {}) is negative: {}"
                                     .format(i, j, m[i, j]))
        if orientation == BACKWARD:
            sums = m.sum(axis=0)
            kind = "column"
        else:
            sums = m.sum(axis=1)
            kind = "row"
        bad = np.abs(sums - 1.0) > STOCHASTIC_TOLERANCE
        if np.any(bad):
            k = int(np.argmax(bad))
            raise NonStochasticError("{} {} of {} matrix sums to {!r}, "
                                     "expected 1"
                                     .format(kind, k, orientation,
                                             float(sums[k])))
        det = float(np.linalg.det(m))
        if abs(det) < SINGULAR_DETERMINANT:
            raise SingularError("{} matrix is singular, det={!r}"
                                .format(orientation, det))
        m.setflags(write=False)
        self._entries = m
        self._orientation = orientation
        self._determinant = det

    @property
    def entries(self):
        """ Read only numpy array with matrix entries.
        """
        return self._entries

    @property
    def orientation(self):
        return self._orientation

    @property
    def num_classes(self):
        return self._entries.shape[0]

    @property
    def determinant(self):
        return self._determinant

    def is_backward(self):
        return self._orientation == BACKWARD

    def is_forward(self):
        return self._orientation == FORWARD

    def tolist(self):
        return self._entries.tolist()

    def __eq__(self, other):
        return isinstance(other, ConfusionMatrix) \
               and self._orientation == other._orientation \
               and np.array_equal(self._entries, other._entries)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __str__(self):
        rows = ["[" + ", ".join("{:.6g}".format(v) for v in r) + "]"
                for r in self._entries]
        return "{}[{}]".format(self._orientation, ", ".join(rows))


class ConfusionDiagnostics(object):
    """ Conditioning figures of confusion matrix.
    """
    def __init__(self, determinant, eigen_ratio, is_permutation):
        """ Create object.
        :param determinant: determinant of matrix.
        :param eigen_ratio: max / min eigenvalue of inv(M) * inv(M)^T.
        :param is_permutation: True if matrix only swaps labels.
        """
        self.determinant = determinant
        self.eigen_ratio = eigen_ratio
        self.log_eigen_ratio = math.log(eigen_ratio)
        self.is_permutation = is_permutation

    def __str__(self):
        return "det={:.9g}, eigen_ratio={:.9g}, log_eigen_ratio={:.9g}, " \
               "permutation={}".format(self.determinant, self.eigen_ratio,
                                       self.log_eigen_ratio,
                                       self.is_permutation)


def build_validated(raw, orientation):
    """ Build confusion matrix from raw entries. Input is never renormalized,
        use normalize_columns() for raw counts.
    :param raw: K x K matrix.
    :param orientation: BACKWARD or FORWARD.
    :return: ConfusionMatrix object.
    """
    return ConfusionMatrix(raw, orientation)


def normalize_columns(raw_counts):
    """ Make backward matrix from counts matrix where column j counts true
        classes of samples annotated with weak label j.
    :param raw_counts: K x K matrix with non negative counts.
    :return: backward ConfusionMatrix.
    """
    counts = np.array(raw_counts, dtype=float)
    if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
        raise DimensionMismatchError("counts matrix is not square, shape {}"
                                     .format(counts.shape))
    if not np.all(np.isfinite(counts)) or np.any(counts < 0.0):
        raise NegativeEntryError("counts must be finite and non negative")
    sums = counts.sum(axis=0)
    for j, s in enumerate(sums):
        if s <= 0.0:
            raise ZeroColumnError("column {} has no counts".format(j))
    return ConfusionMatrix(counts / sums, BACKWARD)


def invert(cm):
    """ Invert confusion matrix with LU decomposition.
        Inverse of stochastic matrix usually has negative entries.
    :param cm: ConfusionMatrix.
    :return: numpy array with inverse matrix.
    """
    try:
        inv = np.linalg.inv(cm.entries)
    except np.linalg.LinAlgError as e:
        raise SingularError("can not invert {} matrix: {}"
                            .format(cm.orientation, e))
    return inv


def diagnostics(cm):
    """ Compute conditioning diagnostics. Eigen ratio of inv(M) * inv(M)^T
        measures extra cost paid for annotation noise, it equals one for
        permutations.
    :param cm: ConfusionMatrix.
    :return: ConfusionDiagnostics object.
    """
    inv = invert(cm)
    product = inv.dot(inv.T)
    # symmetric positive definite, eigenvalues are real and ascending
    eigenvalues = np.linalg.eigh(product)[0]
    if eigenvalues[0] <= 0.0:
        raise SingularError("inverse product is not positive definite, "
                            "min eigenvalue {!r}"
                            .format(float(eigenvalues[0])))
    ratio = max(1.0, float(eigenvalues[-1] / eigenvalues[0]))
    m = cm.entries
    is_permutation = bool(np.all((np.abs(m) <= PERMUTATION_TOLERANCE)
                                 | (np.abs(m - 1.0) <= PERMUTATION_TOLERANCE)))
    d = ConfusionDiagnostics(cm.determinant, ratio, is_permutation)
    logging.debug("Diagnostics of {}: {}".format(cm, d))
    return d


def backward_from_forward(fwd, prior):
    """ Bayes rule between conventions:
            Pr(y=i|weak y=j) = Pr(weak y=j|y=i) p(y=i) / p(weak y=j)
    :param fwd: forward ConfusionMatrix.
    :param prior: DiscretePmf with class prior, strictly positive.
    :return: backward ConfusionMatrix.
    """
    if not fwd.is_forward():
        raise OrientationError("forward matrix expected, got {}"
                               .format(fwd.orientation))
    p = np.asarray(prior.masses, dtype=float)
    if p.shape[0] != fwd.num_classes:
        raise DimensionMismatchError("prior has {} classes, matrix has {}"
                                     .format(p.shape[0], fwd.num_classes))
    if np.any(p <= 0.0):
        raise ZeroWeakLabelMassError("prior must be strictly positive, got {}"
                                     .format(p.tolist()))
    joint = fwd.entries * p[:, np.newaxis]
    marginal = joint.sum(axis=0)
    for j, mass in enumerate(marginal):
        if mass <= 0.0:
            raise ZeroWeakLabelMassError("weak label {} has zero marginal "
                                         "probability".format(j))
    return ConfusionMatrix(joint / marginal, BACKWARD)


def binary_from_kappas(kappa_plus, kappa_minus):
    """ Forward matrix of binary label flipping over classes (+1, -1).
        kappa_plus is the flip rate of true +1 samples, kappa_minus is the
        flip rate of true -1 samples. Matrix is invertible iff
        kappa_plus + kappa_minus != 1, flipped decisions with sum above one
        are handled by the inverse itself.
    :param kappa_plus: Pr(weak y=-1|y=+1) in [0, 1].
    :param kappa_minus: Pr(weak y=+1|y=-1) in [0, 1].
    :return: forward ConfusionMatrix.
    """
    if abs(1.0 - kappa_plus - kappa_minus) < SINGULAR_DETERMINANT:
        raise SingularError("kappa_plus + kappa_minus = {!r} is one"
                            .format(float(kappa_plus + kappa_minus)))
    return ConfusionMatrix([[1.0 - kappa_plus, kappa_plus],
                            [kappa_minus, 1.0 - kappa_minus]], FORWARD)


def permutation_matrix(perm, orientation):
    """ Make matrix which deterministically swaps labels.
    :param perm: sequence, class i is annotated as perm[i].
    :param orientation: BACKWARD or FORWARD.
    :return: ConfusionMatrix.
    """
    k = len(perm)
    m = np.zeros((k, k))
    for i, j in enumerate(perm):
        m[i, j] = 1.0
    if orientation == BACKWARD:
        m = m.T
    return ConfusionMatrix(m, orientation)


def equal_diag_eigen_ratio(num_classes, d):
    """ Closed form eigen ratio for matrix with diagonal d and equal off
        diagonal entries. Such matrix has eigenvalues 1 and (K*d-1)/(K-1).
    :param num_classes: K.
    :param d: diagonal value.
    :return: eigen ratio.
    """
    lam = (num_classes * d - 1.0) / (num_classes - 1.0)
    if lam == 0.0:
        raise SingularError("diagonal {} is singular for {} classes"
                            .format(d, num_classes))
    return max(1.0 / (lam * lam), lam * lam)
