""" Unbiased loss correction for learning with weak labels.
    Forward matrix F keeps Pr(weak y=j|y=i) in (i, j). Corrected loss for
    weak labels is inv(F) * l, so its expectation over weak labels given any
    true class equals the clean loss of that class.
"""

from __future__ import division

import numpy as np

from weak.config import *
from weak.errors import *
from weak.confusion import invert, binary_from_kappas


class LossVector(object):
    """ Loss for each of K candidate labels.
    """
    def __init__(self, values):
        v = np.array(values, dtype=float).ravel()
        if v.size == 0:
            raise DimensionMismatchError("loss vector is empty")
        if not np.all(np.isfinite(v)):
            raise ValueError("loss values must be finite, got {}"
                             .format(v.tolist()))
        v.setflags(write=False)
        self._values = v

    @property
    def values(self):
        return self._values

    def tolist(self):
        return self._values.tolist()

    def __len__(self):
        return self._values.size

    def __getitem__(self, item):
        return float(self._values[item])

    def __eq__(self, other):
        return isinstance(other, LossVector) \
               and np.array_equal(self._values, other._values)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __str__(self):
        return "loss(" + ", ".join("{:.6g}".format(v)
                                   for v in self._values) + ")"


def _check_forward(forward, size):
    if not forward.is_forward():
        raise OrientationError("forward matrix expected, got {}"
                               .format(forward.orientation))
    if forward.num_classes != size:
        raise DimensionMismatchError("{} losses for {} classes"
                                     .format(size, forward.num_classes))


def correct_loss_multiclass(clean_losses, forward):
    """ Corrected loss for each weak label.
    :param clean_losses: LossVector with l(f(x), y=j).
    :param forward: forward ConfusionMatrix.
    :return: LossVector with corrected losses.
    """
    _check_forward(forward, len(clean_losses))
    return LossVector(invert(forward).dot(clean_losses.values))


def correct_loss_table(loss_table, forward):
    """ Correct losses of many samples at once.
    :param loss_table: N x K array, row n keeps clean losses of sample n.
    :param forward: forward ConfusionMatrix.
    :return: N x K numpy array with corrected losses.
    """
    table = np.atleast_2d(np.array(loss_table, dtype=float))
    _check_forward(forward, table.shape[1])
    return table.dot(invert(forward).T)


def correct_loss_binary(loss_pos, loss_neg, kappa_plus, kappa_minus):
    """ Closed form correction for binary labels (+1, -1):
            l~(+1) = ((1 - k-) l(+1) - k+ l(-1)) / (1 - k+ - k-)
            l~(-1) = ((1 - k+) l(-1) - k- l(+1)) / (1 - k+ - k-)
        with flip rates k+ = Pr(weak y=-1|y=+1) and k- = Pr(weak y=+1|y=-1).
        Denominator is negative when k+ + k- > 1, that flips the decision.
    :return: tuple of corrected losses for weak +1 and weak -1.
    """
    denominator = 1.0 - kappa_plus - kappa_minus
    if abs(denominator) < SINGULAR_DETERMINANT:
        raise SingularError("kappa_plus + kappa_minus = {!r} is one"
                            .format(float(kappa_plus + kappa_minus)))
    pos = ((1.0 - kappa_minus) * loss_pos - kappa_plus * loss_neg) \
        / denominator
    neg = ((1.0 - kappa_plus) * loss_neg - kappa_minus * loss_pos) \
        / denominator
    return pos, neg


def correct_loss_binary_matrix(loss_pos, loss_neg, kappa_plus, kappa_minus):
    """ The same as correct_loss_binary() but through the matrix inverse.
    """
    fwd = binary_from_kappas(kappa_plus, kappa_minus)
    res = correct_loss_multiclass(LossVector([loss_pos, loss_neg]), fwd)
    return res[0], res[1]


def expected_weak_loss(corrected, forward, true_label):
    """ Expectation of corrected loss over weak labels for given true class:
            sum_j Pr(weak y=j|y=true_label) * l~(j)
    """
    _check_forward(forward, len(corrected))
    return float(np.dot(forward.entries[true_label], corrected.values))
