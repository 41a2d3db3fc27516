import math
import unittest

from weak.density import *
from weak.confusion import build_validated, permutation_matrix, \
    ConfusionMatrix
from weak.experiment import equal_diag_matrix


class TestDensity(unittest.TestCase):
    def setUp(self):
        self.truths = [binomial_pmf(20, p) for p in (0.52, 0.65, 0.08)]
        self.diag08 = build_validated([[0.8, 0.1, 0.1],
                                       [0.1, 0.8, 0.1],
                                       [0.1, 0.1, 0.8]], BACKWARD)
        self.gps = build_validated([[0.76, 0.24, 0.0],
                                    [0.28, 0.72, 0.0],
                                    [0.0, 0.0, 1.0]], FORWARD)
        self.rng = np.random.default_rng(11)

    def tearDown(self):
        pass

    def __random_pmf(self, s):
        return DiscretePmf(self.rng.dirichlet(np.ones(s)))

    def __random_backward(self, k):
        while True:
            m = self.rng.random((k, k)) + np.eye(k) * k
            m /= m.sum(axis=0)
            if abs(np.linalg.det(m)) > 1e-3:
                return ConfusionMatrix(m, BACKWARD)

    def test_pmf(self):
        p = DiscretePmf([0.25, 0.75])
        self.assertEqual(p.support_size, 2)
        self.assertEqual(len(p), 2)
        self.assertEqual(p, DiscretePmf([0.25, 0.75]))
        self.assertNotEqual(p, DiscretePmf([0.75, 0.25]))
        self.assertRaises(NonStochasticError, DiscretePmf, [0.5, 0.6])
        self.assertRaises(NegativeEntryError, DiscretePmf, [1.1, -0.1])
        self.assertRaises(DimensionMismatchError, DiscretePmf, [])
        # round off negatives are stored as zeros
        p = DiscretePmf([1.0 + 1e-12, -1e-12])
        self.assertEqual(p.masses[1], 0.0)

    def test_pmf_messages(self):
        try:
            DiscretePmf([0.5, 0.75])
        except NonStochasticError as e:
            self.assertEqual(str(e), "pmf sums to 1.25, expected 1")
        else:
            self.fail("NonStochasticError expected")
        try:
            DiscretePmf([1.5, -0.5])
        except NegativeEntryError as e:
            self.assertEqual(str(e), "pmf mass at 1 is negative: -0.5")
        else:
            self.fail("NegativeEntryError expected")

    def test_signed_measure(self):
        sm = SignedMeasure([1.2, -0.2])
        self.assertFalse(sm.is_nonnegative())
        self.assertAlmostEqual(sm.negative_mass(), -0.2)
        self.assertTrue(SignedMeasure([0.5, 0.5]).is_nonnegative())
        self.assertRaises(NonStochasticError, SignedMeasure, [1.2, 0.2])

    def test_dataset(self):
        data = WeakDataset.from_pairs([(0, 1), (2, 0)], 3, 2)
        self.assertEqual(len(data), 2)
        self.assertEqual(data.samples, [(0, 1), (2, 0)])
        self.assertRaises(DimensionMismatchError, WeakDataset.from_pairs,
                          [(3, 0)], 3, 2)
        self.assertRaises(DimensionMismatchError, WeakDataset.from_pairs,
                          [(0, 2)], 3, 2)
        self.assertRaises(DimensionMismatchError, WeakDataset, [0, 1], [0],
                          3, 2)
        self.assertEqual(len(WeakDataset([], [], 3, 2)), 0)

    def test_empirical_conditionals(self):
        data = WeakDataset.from_pairs([(0, 0), (0, 0), (0, 0), (1, 0),
                                       (1, 1)], 2, 2)
        q = empirical_conditionals(data, 0.0)
        self.assertTrue(np.allclose(q[0].masses, [0.75, 0.25]))
        self.assertTrue(np.allclose(q[1].masses, [0.0, 1.0]))
        self.assertEqual(weak_label_counts(data), [4, 1])
        data = WeakDataset.from_pairs([(0, 0)], 3, 2)
        q = empirical_conditionals(data, 0.5)
        self.assertTrue(np.allclose(q[1].masses, [1.0 / 3] * 3))
        self.assertTrue(np.allclose(q[0].masses, [0.6, 0.2, 0.2]))
        self.assertRaises(EmptyWeakClassError, empirical_conditionals, data,
                          0.0)
        q = empirical_conditionals(data, 0.0, empty_as_uniform=True)
        self.assertTrue(np.allclose(q[1].masses, [1.0 / 3] * 3))
        self.assertRaises(ValueError, empirical_conditionals, data, -1.0)

    def test_empirical_binomial(self):
        xs = self.rng.binomial(20, 0.52, size=100000)
        data = WeakDataset(xs, np.zeros(xs.size), 21, 1)
        q = empirical_conditionals(data, 0.0)[0]
        tv = 0.5 * np.sum(np.abs(q.masses - self.truths[0].masses))
        self.assertLess(tv, 0.01)

    def test_correct_identity_and_permutation(self):
        weak = [self.__random_pmf(5) for _ in range(3)]
        res = correct_densities(weak, build_validated(np.eye(3), BACKWARD))
        for w, r in zip(weak, res):
            self.assertTrue(np.array_equal(w.masses, r.values))
        # class 1 is annotated as 2 and vice versa
        swap = permutation_matrix([0, 2, 1], BACKWARD)
        res = correct_densities(weak, swap)
        self.assertTrue(np.array_equal(res[0].values, weak[0].masses))
        self.assertTrue(np.array_equal(res[1].values, weak[2].masses))
        self.assertTrue(np.array_equal(res[2].values, weak[1].masses))

    def test_recovery(self):
        weak = mix_densities(self.truths, self.diag08)
        # mixtures differ from truth
        self.assertGreater(sum_kl(self.truths, weak), 0.1)
        res = correct_densities(weak, self.diag08)
        for t, r in zip(self.truths, res):
            self.assertLess(np.max(np.abs(t.masses - r.values)), 1e-10)
        pmfs = [project_to_pmf(r) for r in res]
        self.assertLess(sum_kl(self.truths, pmfs), 1e-9)

    def test_round_trip(self):
        for k in (2, 3, 5):
            for _ in range(33):
                backward = self.__random_backward(k)
                weak = [self.__random_pmf(7) for _ in range(k)]
                corrected = correct_densities(weak, backward)
                mixed = np.column_stack([c.values for c in corrected]) \
                    .dot(backward.entries)
                for j in range(k):
                    self.assertLess(np.max(np.abs(mixed[:, j]
                                                  - weak[j].masses)), 1e-9)

    def test_correct_errors(self):
        weak = [self.__random_pmf(4) for _ in range(3)]
        fwd = build_validated(np.eye(3), FORWARD)
        self.assertRaises(OrientationError, correct_densities, weak, fwd)
        self.assertRaises(DimensionMismatchError, correct_densities,
                          weak[:2], self.diag08)
        self.assertRaises(OrientationError, mix_densities, self.truths,
                          self.gps)
        weak[1] = self.__random_pmf(5)
        self.assertRaises(DimensionMismatchError, correct_densities, weak,
                          self.diag08)

    def test_project(self):
        p = project_to_pmf(SignedMeasure([0.5, 0.5, 0.0]))
        self.assertTrue(np.array_equal(p.masses, [0.5, 0.5, 0.0]))
        p = project_to_pmf(SignedMeasure([0.5, 0.5, 0.0]),
                           PROJECTION_SIMPLEX)
        self.assertTrue(np.allclose(p.masses, [0.5, 0.5, 0.0]))
        p = project_to_pmf(SignedMeasure([1.2, -0.2]), PROJECTION_CLIP)
        self.assertTrue(np.allclose(p.masses, [1.0, 0.0]))
        p = project_to_pmf(SignedMeasure([0.7, 0.5, -0.2]),
                           PROJECTION_SIMPLEX)
        self.assertTrue(np.allclose(p.masses, [0.6, 0.4, 0.0], atol=1e-12))
        # measure built with loose tolerance is still rejected
        self.assertRaises(NonStochasticError, project_to_pmf,
                          SignedMeasure([0.7, 0.7, -0.3], tolerance=1.0))

    def test_project_random(self):
        for _ in range(50):
            v = self.rng.normal(size=6)
            v += (1.0 - v.sum()) / v.size
            sm = SignedMeasure(v)
            for method in PROJECTIONS:
                p = project_to_pmf(sm, method)
                self.assertTrue(np.all(p.masses >= 0.0))
                self.assertAlmostEqual(p.masses.sum(), 1.0, places=9)
            if sm.is_nonnegative():
                self.assertTrue(np.allclose(project_to_pmf(sm).masses, v))

    def test_project_idempotent(self):
        for _ in range(50):
            v = self.rng.normal(size=7)
            v += (1.0 - v.sum()) / v.size
            sm = SignedMeasure(v)
            for method in PROJECTIONS:
                once = project_to_pmf(sm, method)
                twice = project_to_pmf(once, method)
                self.assertTrue(np.allclose(twice.masses, once.masses,
                                            rtol=0, atol=1e-12))

    def test_correct_posterior(self):
        p = DiscretePmf([0.2, 0.3, 0.5])
        res = correct_posterior(p, build_validated(np.eye(3), FORWARD))
        self.assertTrue(np.allclose(res.values, p.masses))
        res = correct_posterior(DiscretePmf([0.76, 0.24, 0.0]), self.gps)
        self.assertTrue(np.allclose(res.values, [1.0, 0.0, 0.0],
                                    atol=1e-12))
        uniform = DiscretePmf([1.0 / 3] * 3)
        res = correct_posterior(uniform, equal_diag_matrix(3, 0.8))
        self.assertTrue(np.allclose(res.values, uniform.masses))
        self.assertRaises(OrientationError, correct_posterior, uniform,
                          self.diag08)

    def test_kl(self):
        p = DiscretePmf([0.75, 0.25])
        q = DiscretePmf([0.5, 0.5])
        self.assertEqual(kl_divergence(p, p), 0.0)
        self.assertAlmostEqual(kl_divergence(DiscretePmf([1.0, 0.0]), q),
                               0.693147, places=6)
        self.assertAlmostEqual(kl_divergence(p, q), 0.130812, places=6)
        self.assertRaises(DimensionMismatchError, kl_divergence, p,
                          DiscretePmf([1.0 / 3] * 3))
        # zero estimate is floored, the result is finite
        d = kl_divergence(q, DiscretePmf([1.0, 0.0]))
        self.assertAlmostEqual(d, 0.5 * math.log(0.5 / KL_FLOOR)
                               + 0.5 * math.log(0.5), places=6)

    def test_sum_kl(self):
        p = DiscretePmf([0.75, 0.25])
        q = DiscretePmf([0.5, 0.5])
        self.assertEqual(sum_kl([p, q, p], [p, q, p]), 0.0)
        self.assertAlmostEqual(sum_kl([p, q, q], [q, q, q]), 0.130812,
                               places=6)
        self.assertRaises(DimensionMismatchError, sum_kl, [p, q], [p])

    def test_binomial(self):
        self.assertTrue(np.allclose(binomial_pmf(1, 0.5).masses, [0.5, 0.5]))
        self.assertTrue(np.allclose(binomial_pmf(2, 0.08).masses,
                                    [0.8464, 0.1472, 0.0064]))
        p = binomial_pmf(20, 0.0)
        self.assertEqual(p.support_size, 21)
        self.assertEqual(p.masses[0], 1.0)
        self.assertEqual(p.masses[1:].sum(), 0.0)
        self.assertRaises(ValueError, binomial_pmf, 0, 0.5)
        self.assertRaises(ValueError, binomial_pmf, 5, 1.5)


if __name__ == '__main__':
    unittest.main()
