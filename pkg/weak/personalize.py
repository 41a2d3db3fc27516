""" Personalization of a generative activity classifier with weak labels.
    Always-on feature symbols are annotated opportunistically by a GPS speed
    threshold classifier. Annotation noise of this classifier is corrected
    with the inverse of its backward confusion matrix before the Dirichlet
    pseudo counts of the population model are updated.
"""

from __future__ import division
import logging

import numpy as np

from weak.config import *
from weak.enums import *
from weak.errors import *
from weak.confusion import *
from weak.density import *
from weak.experiment import mix_seed

# activities, in order of confusion matrix rows
CALL = 0
SLOW_WALK = 1
BIKE = 2
CLASS_NAMES = ["call", "slow walk", "bike"]
# speed annotator output when speed is out of every class interval
NO_READING = None


class DirichletCategoricalModel(object):
    """ Generative classifier: Dirichlet pseudo counts over feature alphabet
        for each class and class prior. Object is immutable, updates return
        new model.
    """
    def __init__(self, concentrations, class_prior):
        """ Create model.
        :param concentrations: K x S pseudo counts, each row has positive sum.
        :param class_prior: DiscretePmf over K classes.
        """
        c = np.array(concentrations, dtype=float)
        if c.ndim != 2:
            raise DimensionMismatchError("concentrations must be K x S")
        if not np.all(np.isfinite(c)) or np.any(c < 0.0):
            raise NegativeEntryError("concentrations must be non negative")
        sums = c.sum(axis=1)
        for i, s in enumerate(sums):
            if s <= 0.0:
                raise ZeroColumnError("class {} has no pseudo counts"
                                      .format(i))
        if class_prior.support_size != c.shape[0]:
            raise DimensionMismatchError("prior over {} classes, model has {}"
                                         .format(class_prior.support_size,
                                                 c.shape[0]))
        c.setflags(write=False)
        self._concentrations = c
        self.class_prior = class_prior

    @property
    def concentrations(self):
        return self._concentrations

    @property
    def num_classes(self):
        return self._concentrations.shape[0]

    @property
    def support_size(self):
        return self._concentrations.shape[1]

    def total_mass(self):
        return float(self._concentrations.sum())

    def with_added(self, counts):
        """ New model with counts added to concentrations.
        """
        return DirichletCategoricalModel(self._concentrations + counts,
                                         self.class_prior)

    def predictive(self, label):
        """ Posterior predictive distribution of symbols for class.
        :param label: class index.
        :return: DiscretePmf.
        """
        row = self._concentrations[label]
        return DiscretePmf(row / row.sum())

    def scores(self):
        """ K x S table with prior(i) * predictive(i)(x).
        """
        c = self._concentrations
        return self.class_prior.masses[:, np.newaxis] \
            * c / c.sum(axis=1)[:, np.newaxis]

    def __eq__(self, other):
        return isinstance(other, DirichletCategoricalModel) \
               and self.class_prior == other.class_prior \
               and np.array_equal(self._concentrations,
                                  other._concentrations)

    def __ne__(self, other):
        return not self.__eq__(other)


class AnnotatedSample(object):
    """ One time slot of a user trace. True label is used only for
        evaluation and ground truth personalization.
    """
    def __init__(self, x, speed, true_label):
        self.x = x
        self.speed = speed
        self.true_label = true_label

    def __eq__(self, other):
        return isinstance(other, AnnotatedSample) and self.x == other.x \
               and self.speed == other.speed \
               and self.true_label == other.true_label

    def __ne__(self, other):
        return not self.__eq__(other)

    def __str__(self):
        return "sample(x={}, speed={:.3f}, label={})" \
            .format(self.x, self.speed, self.true_label)


def speed_annotator(speed):
    """ Threshold classifier on GPS speed.
        [0, 0.1] mph is call(fidget), (0.1, 1] is slow walk, (3, 25] is bike.
    :param speed: speed in mph, non negative.
    :return: class index or NO_READING.
    """
    if speed < 0:
        raise ValueError("speed can't be negative, got {}".format(speed))
    if speed <= FIDGET_MAX_MPH:
        return CALL
    if speed <= SLOW_WALK_MAX_MPH:
        return SLOW_WALK
    if BIKE_MIN_MPH < speed <= BIKE_MAX_MPH:
        return BIKE
    return NO_READING


def gen_user_trace(per_class_emissions, per_class_speed_models, segment_plan,
                   seed):
    """ Simulate user trace.
    :param per_class_emissions: list of K DiscretePmf over feature alphabet.
    :param per_class_speed_models: list of K (low, high) mph pairs, speed is
                                   uniform in this interval.
    :param segment_plan: list of (class, number of samples) segments.
    :param seed: integer seed.
    :return: list of AnnotatedSample.
    """
    rng = np.random.default_rng(seed)
    res = []
    for label, count in segment_plan:
        emission = per_class_emissions[label]
        low, high = per_class_speed_models[label]
        xs = rng.choice(emission.support_size, size=count, p=emission.masses)
        speeds = rng.uniform(low, high, size=count)
        res.extend(AnnotatedSample(int(x), float(s), label)
                   for x, s in zip(xs, speeds))
    return res


def _counts(pairs, num_classes, support_size):
    counts = np.zeros((num_classes, support_size))
    if pairs:
        xs, labels = zip(*pairs)
        np.add.at(counts, (np.asarray(labels), np.asarray(xs)), 1.0)
    return counts


def update_ground_truth(model, samples):
    """ Add counts of clean (x, true label) pairs to concentrations.
    :param model: DirichletCategoricalModel.
    :param samples: list of (x, label) pairs.
    :return: new DirichletCategoricalModel.
    """
    samples = list(samples)
    counts = _counts(samples, model.num_classes, model.support_size)
    logging.debug("Ground truth update with {} samples".format(len(samples)))
    return model.with_added(counts)


def update_weak_corrected(model, samples, backward,
                          projection=PROJECTION_CLIP,
                          smoothing=PERSONALIZATION_SMOOTHING):
    """ Add noise corrected counts of (x, weak label) pairs. Weak
        conditionals are corrected with inverse of backward matrix, projected
        to pmfs and scaled by expected number of samples of each class
            n~(i) = sum_j PI(i, j) * n(j)
        so total added mass equals number of samples.
    :param model: DirichletCategoricalModel.
    :param samples: list of (x, weak label) pairs, without NO_READING.
    :param backward: backward ConfusionMatrix of annotator.
    :param projection: Projection enum.
    :param smoothing: pseudo count of weak conditionals.
    :return: new DirichletCategoricalModel.
    """
    data = WeakDataset.from_pairs(samples, model.support_size,
                                  model.num_classes)
    if len(data) == 0:
        return model.with_added(np.zeros_like(model.concentrations))
    n = np.array(weak_label_counts(data), dtype=float)
    weak = empirical_conditionals(data, smoothing, empty_as_uniform=True)
    corrected = correct_densities(weak, backward)
    expected = backward.entries.dot(n)
    added = np.zeros_like(model.concentrations)
    for i in range(model.num_classes):
        if expected[i] <= 0.0:
            continue
        added[i] = expected[i] * project_to_pmf(corrected[i],
                                                projection).masses
    logging.debug("Weak update with {} samples, expected class counts {}"
                  .format(len(data), expected.tolist()))
    return model.with_added(added)


def predictive_posterior(model, x):
    """ Posterior over classes of symbol x under model.
    :return: DiscretePmf over K classes.
    """
    s = model.scores()[:, x]
    return DiscretePmf(s / s.sum())


def map_predict(model, x):
    """ Most probable class of symbol x, ties go to the lowest class index.
    """
    return int(np.argmax(model.scores()[:, x]))


def empirical_ber(model, eval_samples):
    """ Empirical Bayes error rate of MAP decision.
    :param model: DirichletCategoricalModel.
    :param eval_samples: list of (x, true label) pairs.
    :return: fraction of misclassified samples.
    """
    eval_samples = list(eval_samples)
    if not eval_samples:
        raise EmptyEvalSetError("evaluation set is empty")
    decisions = np.argmax(model.scores(), axis=0)
    xs, labels = zip(*eval_samples)
    wrong = decisions[np.asarray(xs)] != np.asarray(labels)
    return float(np.count_nonzero(wrong)) / len(eval_samples)


def annotator_confusion(samples, num_classes=len(CLASS_NAMES)):
    """ Empirical confusion of speed annotator.
    :param samples: list of AnnotatedSample.
    :param num_classes: K.
    :return: tuple of K x K numpy array with Pr(annotation|true label) over
             samples with reading, and fraction of samples without reading.
    """
    counts = np.zeros((num_classes, num_classes))
    missing = 0
    for s in samples:
        label = speed_annotator(s.speed)
        if label is NO_READING:
            missing += 1
            continue
        counts[s.true_label, label] += 1
    sums = counts.sum(axis=1)
    rates = np.divide(counts, sums[:, np.newaxis],
                      out=np.zeros_like(counts),
                      where=sums[:, np.newaxis] > 0)
    total = len(samples)
    return rates, (missing / total if total else 0.0)


def user_emissions(alphabet_size=ALPHABET_SIZE, num_classes=3,
                   noise=EMISSION_NOISE):
    """ Emission model of simulated user. Class i puts 1 - noise of its
        mass uniformly on i-th contiguous block of alphabet and noise
        uniformly over whole alphabet.
    :return: list of K DiscretePmf.
    """
    blocks = np.array_split(np.arange(alphabet_size), num_classes)
    res = []
    for block in blocks:
        m = np.full(alphabet_size, noise / alphabet_size)
        m[block] += (1.0 - noise) / block.size
        res.append(DiscretePmf(m))
    return res


def baseline_model(emissions, shift=BASELINE_SHIFT,
                   uniform_mix=BASELINE_UNIFORM_MIX,
                   strength=BASELINE_STRENGTH, class_prior=None):
    """ Population model which doesn't fit the user. Each user emission is
        circularly shifted by shift symbols, interpolated toward uniform and
        scaled to strength pseudo counts.
    :return: DirichletCategoricalModel.
    """
    k = len(emissions)
    if class_prior is None:
        class_prior = DiscretePmf(np.full(k, 1.0 / k))
    rows = []
    for e in emissions:
        population = np.roll(e.masses, shift)
        rows.append(strength * ((1.0 - uniform_mix) * population
                                + uniform_mix / e.support_size))
    return DirichletCategoricalModel(rows, class_prior)


class PersonalizeConfig(object):
    """ Configuration of personalization demo, validated on construction.
    """
    def __init__(self, seeds=None, alphabet_size=ALPHABET_SIZE,
                 emission_noise=EMISSION_NOISE, baseline_shift=BASELINE_SHIFT,
                 baseline_uniform_mix=BASELINE_UNIFORM_MIX,
                 baseline_strength=BASELINE_STRENGTH,
                 personalization_samples=PERSONALIZATION_SAMPLES,
                 evaluation_samples=EVALUATION_SAMPLES,
                 annotator_check_samples=ANNOTATOR_CHECK_SAMPLES,
                 speed_models=None, annotator_confusion=None,
                 projection=None, smoothing=PERSONALIZATION_SMOOTHING):
        if seeds is None:
            seeds = PERSONALIZATION_SEEDS
        if speed_models is None:
            speed_models = SPEED_MODELS
        if annotator_confusion is None:
            annotator_confusion = GPS_CONFUSION
        if projection is None:
            projection = from_name(PROJECTIONS, PROJECTION)
        self.seeds = [int(s) for s in seeds]
        if not self.seeds or any(s < 0 for s in self.seeds):
            raise ValueError("at least one non negative seed required")
        self.alphabet_size = int(alphabet_size)
        if self.alphabet_size < len(CLASS_NAMES):
            raise ValueError("alphabet must have at least {} symbols"
                             .format(len(CLASS_NAMES)))
        self.emission_noise = float(emission_noise)
        if not 0.0 <= self.emission_noise <= 1.0:
            raise ValueError("emission_noise must be in [0, 1]")
        self.baseline_shift = int(baseline_shift)
        self.baseline_uniform_mix = float(baseline_uniform_mix)
        if not 0.0 <= self.baseline_uniform_mix <= 1.0:
            raise ValueError("baseline_uniform_mix must be in [0, 1]")
        self.baseline_strength = float(baseline_strength)
        if self.baseline_strength <= 0:
            raise ValueError("baseline_strength must be positive")
        self.personalization_samples = int(personalization_samples)
        self.evaluation_samples = int(evaluation_samples)
        self.annotator_check_samples = int(annotator_check_samples)
        if min(self.personalization_samples, self.evaluation_samples,
               self.annotator_check_samples) < 1:
            raise ValueError("sample counts must be positive")
        self.speed_models = [(float(lo), float(hi)) for lo, hi in speed_models]
        if len(self.speed_models) != len(CLASS_NAMES):
            raise DimensionMismatchError("{} speed models for {} classes"
                                         .format(len(self.speed_models),
                                                 len(CLASS_NAMES)))
        for lo, hi in self.speed_models:
            if lo < 0 or hi < lo:
                raise ValueError("bad speed interval [{}, {}]".format(lo, hi))
        self.annotator_forward = build_validated(annotator_confusion, FORWARD)
        if self.annotator_forward.num_classes != len(CLASS_NAMES):
            raise DimensionMismatchError("annotator confusion must be {0}x{0}"
                                         .format(len(CLASS_NAMES)))
        self.projection = projection
        self.smoothing = float(smoothing)
        if self.smoothing < 0:
            raise ValueError("smoothing must be non negative")
        k = len(CLASS_NAMES)
        self.backward = backward_from_forward(
            self.annotator_forward, DiscretePmf(np.full(k, 1.0 / k)))

    def to_dict(self):
        return {"seeds": list(self.seeds),
                "alphabet_size": self.alphabet_size,
                "emission_noise": self.emission_noise,
                "baseline_shift": self.baseline_shift,
                "baseline_uniform_mix": self.baseline_uniform_mix,
                "baseline_strength": self.baseline_strength,
                "personalization_samples": self.personalization_samples,
                "evaluation_samples": self.evaluation_samples,
                "annotator_check_samples": self.annotator_check_samples,
                "speed_models": [list(m) for m in self.speed_models],
                "annotator_confusion": self.annotator_forward.tolist(),
                "projection": str(self.projection),
                "smoothing": self.smoothing}


def run_personalization(cfg, seed):
    """ Personalize population model for one simulated user with ground
        truth and with corrected speed annotations, evaluate all three
        models on transition trace.
    :param cfg: PersonalizeConfig.
    :param seed: user seed.
    :return: dict with error rates.
    """
    k = len(CLASS_NAMES)
    emissions = user_emissions(cfg.alphabet_size, k, cfg.emission_noise)
    baseline = baseline_model(emissions, cfg.baseline_shift,
                              cfg.baseline_uniform_mix,
                              cfg.baseline_strength)
    train = gen_user_trace(emissions, cfg.speed_models,
                           [(c, cfg.personalization_samples)
                            for c in range(k)], mix_seed(seed, 0))
    test = gen_user_trace(emissions, cfg.speed_models,
                          [(c, cfg.evaluation_samples) for c in range(k)],
                          mix_seed(seed, 1))
    ground_truth = update_ground_truth(baseline, [(s.x, s.true_label)
                                                  for s in train])
    weak_pairs = []
    for s in train:
        label = speed_annotator(s.speed)
        if label is not NO_READING:
            weak_pairs.append((s.x, label))
    if len(weak_pairs) != len(train):
        logging.info("Seed {}: {} samples without speed reading dropped"
                     .format(seed, len(train) - len(weak_pairs)))
    weak = update_weak_corrected(baseline, weak_pairs, cfg.backward,
                                 cfg.projection, cfg.smoothing)
    evaluation = [(s.x, s.true_label) for s in test]
    res = {"seed": seed,
           "ber_baseline": empirical_ber(baseline, evaluation),
           "ber_ground_truth": empirical_ber(ground_truth, evaluation),
           "ber_weak_corrected": empirical_ber(weak, evaluation),
           "dropped": len(train) - len(weak_pairs)}
    logging.info("Seed {}: BER baseline {:.3f}, ground truth {:.3f}, weak "
                 "corrected {:.3f}".format(seed, res["ber_baseline"],
                                           res["ber_ground_truth"],
                                           res["ber_weak_corrected"]))
    return res


def run_demo(cfg):
    """ Run personalization for every seed of config.
    :param cfg: PersonalizeConfig.
    :return: report dict with median error rates, per seed results and
             empirical confusion of speed annotator.
    """
    per_seed = [run_personalization(cfg, s) for s in cfg.seeds]
    k = len(CLASS_NAMES)
    check = gen_user_trace(user_emissions(cfg.alphabet_size, k,
                                          cfg.emission_noise),
                           cfg.speed_models,
                           [(c, cfg.annotator_check_samples)
                            for c in range(k)],
                           mix_seed(cfg.seeds[0], 2))
    confusion, missing = annotator_confusion(check, k)
    report = {"config": cfg.to_dict(), "per_seed": per_seed,
              "annotator_confusion_empirical": confusion.tolist(),
              "annotator_no_reading_fraction": missing}
    for key in ("ber_baseline", "ber_ground_truth", "ber_weak_corrected"):
        report[key] = float(np.median([r[key] for r in per_seed]))
    return report
