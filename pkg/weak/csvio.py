""" CSV readers and writers. Blank lines and lines which start with '#' are
    skipped by all readers. First row is treated as header if its first cell
    is not a number.
"""

import csv
import logging

import numpy as np

from weak.errors import *
from weak.confusion import build_validated
from weak.density import DiscretePmf, WeakDataset


def format_value(v):
    """ Integers as is, everything else with 9 significant digits.
    """
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "{:.9g}".format(v)


def format_exact(v):
    """ Shortest text which reads back to the same float.
    """
    s = repr(float(v))
    if s.endswith(".0"):
        s = s[:-2]
    return s


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def _read_rows(path):
    """ Read non empty rows with their line numbers, header dropped.
    """
    rows = []
    with open(path, "r") as f:
        for line_number, row in enumerate(csv.reader(f), 1):
            cells = [c.strip() for c in row]
            if not cells or all(c == "" for c in cells) \
                    or cells[0].startswith("#"):
                continue
            if not rows and not _is_number(cells[0]):
                logging.debug("{}: header {} skipped".format(path, cells))
                continue
            rows.append((line_number, cells))
    if not rows:
        raise ParseError("{}: no data rows".format(path))
    return rows


def _to_float(path, line_number, cell):
    try:
        return float(cell)
    except ValueError:
        raise ParseError("{}:{}: '{}' is not a number"
                         .format(path, line_number, cell))


def _to_index(path, line_number, cell):
    v = _to_float(path, line_number, cell)
    if v != int(v) or v < 0:
        raise ParseError("{}:{}: '{}' is not a non negative integer"
                         .format(path, line_number, cell))
    return int(v)


def load_matrix_csv(path, orientation):
    """ Load K x K confusion matrix, K rows of K comma separated numbers.
        Orientation is never inferred from data.
    :param path: file path.
    :param orientation: BACKWARD or FORWARD.
    :return: ConfusionMatrix.
    """
    m = []
    for line_number, cells in _read_rows(path):
        m.append([_to_float(path, line_number, c) for c in cells])
    widths = set(len(r) for r in m)
    if len(widths) != 1:
        raise DimensionMismatchError("{}: rows have different lengths {}"
                                     .format(path, sorted(widths)))
    return build_validated(m, orientation)


def write_matrix_csv(path, matrix):
    """ Write ConfusionMatrix or plain 2d array without header.
    """
    entries = np.asarray(getattr(matrix, "entries", matrix)).tolist()
    with open(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        for r in entries:
            writer.writerow([format_exact(v) for v in r])


def load_densities_csv(path):
    """ Load one density per column. Each row is 'index,v0,...,vK-1' and
        indexes must go 0, 1, ..., S-1.
    :param path: file path.
    :return: list of K DiscretePmf.
    """
    values = []
    for line_number, cells in _read_rows(path):
        index = _to_index(path, line_number, cells[0])
        if index != len(values):
            raise ParseError("{}:{}: index {} expected, got {}"
                             .format(path, line_number, len(values), index))
        values.append([_to_float(path, line_number, c) for c in cells[1:]])
    widths = set(len(r) for r in values)
    if len(widths) != 1 or 0 in widths:
        raise DimensionMismatchError("{}: rows have different number of "
                                     "densities".format(path))
    table = np.array(values)
    return [DiscretePmf(table[:, j]) for j in range(table.shape[1])]


def load_weak_dataset(path, support_size=None, num_classes=None):
    """ Load two column CSV with (x index, weak label) rows.
    :param path: file path.
    :param support_size: S, largest symbol + 1 if None.
    :param num_classes: K, largest label + 1 if None.
    :return: WeakDataset.
    """
    xs = []
    labels = []
    for line_number, cells in _read_rows(path):
        if len(cells) != 2:
            raise ParseError("{}:{}: two columns expected, got {}"
                             .format(path, line_number, len(cells)))
        xs.append(_to_index(path, line_number, cells[0]))
        labels.append(_to_index(path, line_number, cells[1]))
    if support_size is None:
        support_size = max(xs) + 1
    if num_classes is None:
        num_classes = max(labels) + 1
    logging.info("{} samples loaded from {}".format(len(xs), path))
    return WeakDataset(xs, labels, support_size, num_classes)


def write_measures_csv(path, pmfs, signed=None):
    """ Write projected pmfs and optionally signed measures they came from.
        Header is 'index,pmf_0,...,pmf_K-1[,signed_0,...,signed_K-1]'.
    :param path: file path.
    :param pmfs: list of K DiscretePmf.
    :param signed: list of K SignedMeasure or None.
    """
    columns = [p.values for p in pmfs]
    header = ["index"] + ["pmf_{}".format(i) for i in range(len(pmfs))]
    if signed is not None:
        columns += [s.values for s in signed]
        header += ["signed_{}".format(i) for i in range(len(signed))]
    table = np.column_stack(columns)
    with open(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for a, r in enumerate(table):
            writer.writerow([str(a)] + [format_exact(v) for v in r])
    logging.info("{} measures written to {}".format(len(pmfs), path))


def write_pmf_csv(path, measure):
    """ Write single pmf or signed measure as (index, value) rows.
    """
    with open(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        for a, v in enumerate(measure.values):
            writer.writerow([str(a), format_exact(v)])
