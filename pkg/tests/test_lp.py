from unittest import TestCase

import numpy as np

from qcthermo import (
    LPProblem,
    QCState,
    Spectrum,
    TheoryParams,
    bruteforce_type2_error,
    dual_certificate,
    equimajorizes,
    find_witness,
    solve_lp,
    type2_error,
    verify_witness,
)
from qcthermo.divergences import hinge_dominates
from qcthermo.exceptions import (
    DomainError,
    ResourceLimit,
    SolverFailure,
    TheoryMismatch,
)
from qcthermo.lp import dual_value, is_dual_feasible, witness_to_json
from qcthermo.states import equilibrium

THEORY = TheoryParams(1.0)
FLAT = Spectrum.from_arrays([0.0, 0.0, 0.0])

R1 = QCState(FLAT, [0.6, 0.4, 0.0], THEORY)
R2 = QCState(FLAT, [0.7, 0.15, 0.15], THEORY)
R3 = QCState(FLAT, [0.5, 0.3, 0.2], THEORY)


class TestSimplex(TestCase):
    def test_inequalities(self):
        problem = LPProblem([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
        result = solve_lp(problem)
        self.assertEqual("optimal", result.status)
        np.testing.assert_allclose([1.6, 1.2], result.x)
        self.assertAlmostEqual(-2.8, result.value)

    def test_transportation_with_a_redundant_row(self):
        problem = LPProblem(
            [1, 4, 2, 1],
            A_eq=[[1, 1, 0, 0], [0, 0, 1, 1], [1, 0, 1, 0], [0, 1, 0, 1]],
            b_eq=[3, 2, 1, 4])
        result = solve_lp(problem)
        self.assertEqual("optimal", result.status)
        self.assertAlmostEqual(11.0, result.value)
        np.testing.assert_allclose([1, 2, 0, 2], result.x, atol=1e-9)

    def test_degenerate_cycling_example(self):
        # cycles forever under the largest-coefficient rule
        problem = LPProblem(
            [-0.75, 20, -0.5, 6],
            A_ub=[[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]],
            b_ub=[0, 0, 1])
        result = solve_lp(problem)
        self.assertEqual("optimal", result.status)
        self.assertAlmostEqual(-1.25, result.value)

    def test_infeasible(self):
        problem = LPProblem([1, 1], A_eq=[[1, 1], [1, 1]], b_eq=[1, 2])
        result = solve_lp(problem)
        self.assertEqual("infeasible", result.status)
        assert result.x is None

    def test_unbounded(self):
        result = solve_lp(LPProblem([-1]))
        self.assertEqual("unbounded", result.status)
        assert result.value is None

    def test_bounds(self):
        result = solve_lp(LPProblem([1], bounds=[(-3, None)]))
        self.assertAlmostEqual(-3.0, result.value)

        result = solve_lp(LPProblem([-1], bounds=[(None, 4)]))
        self.assertAlmostEqual(-4.0, result.value)
        self.assertAlmostEqual(4.0, result.x[0])

        result = solve_lp(LPProblem([1, -1], A_eq=[[1, 1]], b_eq=[0],
                                    bounds=[(None, None), (-2, 2)]))
        self.assertAlmostEqual(-4.0, result.value)
        np.testing.assert_allclose([-2, 2], result.x, atol=1e-9)

    def test_pivot_cap(self):
        problem = LPProblem([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
        with self.assertRaises(SolverFailure):
            solve_lp(problem, max_iter=0)

    def test_bad_problems(self):
        with self.assertRaises(DomainError):
            LPProblem([1, 1], A_eq=[[1, 1, 1]], b_eq=[1])
        with self.assertRaises(DomainError):
            LPProblem([1], bounds=[(2, 1)])
        with self.assertRaises(DomainError):
            LPProblem([1, 1], bounds=[(0, 1)])
        with self.assertRaises(ResourceLimit):
            LPProblem(np.zeros(5001))


class TestWitness(TestCase):
    def test_r1_to_r3(self):
        witness = find_witness(R1, R3)
        assert witness is not None
        self.assertEqual((3, 3), witness.shape)
        assert verify_witness(witness, R1, R3)
        np.testing.assert_allclose(R3.probs, witness.apply(R1.probs),
                                   atol=1e-8)

    def test_no_witness_against_the_order(self):
        assert find_witness(R3, R1) is None
        assert find_witness(R1, R2) is None
        assert find_witness(R2, R1) is None

    def test_across_spectra(self):
        theory = TheoryParams(1.0, 0.5)
        levels = Spectrum([(0, 0), (1, 1), (1, 0)])
        sharp = QCState(levels, [0.2, 0.5, 0.3], theory)
        pure = QCState(Spectrum.from_arrays([0.0, 3.0]), [0.0, 1.0], theory)

        witness = find_witness(pure, sharp)
        self.assertEqual((3, 2), witness.shape)
        assert verify_witness(witness.matrix, pure, sharp)

    def test_verify_rejects_bad_matrices(self):
        assert not verify_witness(np.eye(3), R1, R3)
        assert not verify_witness(np.eye(2), R1, R3)
        assert verify_witness(np.eye(3), R3, R3)

    def test_json(self):
        blob = witness_to_json(find_witness(R3, R3))
        self.assertEqual(3, blob["rows"])
        self.assertEqual(3, blob["cols"])
        self.assertEqual(3, len(blob["data"]))
        self.assertIs(float, type(blob["data"][0][0]))

    def test_self_and_equilibrium_witnesses(self):
        # phase one ends with a zero artificial whose row has only tiny
        # entries; driving it out must not pivot on them
        probs = np.array([3.6e-5, 3.0e-4, 0.0148, 0.0177, 0.345, 0.622])
        spectrum = Spectrum.from_arrays([0.9, 0.7, 0.5, 0.4, 0.2, 0.0],
                                        [1, 0, 1, 0, 1, 0])
        states = [QCState(spectrum, probs / probs.sum(),
                          TheoryParams(0.128, 1.351))]
        rng = np.random.RandomState(11)
        for _ in range(300):
            theory = TheoryParams(rng.uniform(0.1, 5.0),
                                  rng.uniform(-2.0, 2.0))
            states.append(_random_state(rng, theory, rng.randint(1, 7)))

        for state in states:
            for target in (state, equilibrium(state)):
                witness = find_witness(state, target)
                assert witness is not None
                assert verify_witness(witness, state, target)

    def test_theories_must_match(self):
        other = QCState(FLAT, [0.5, 0.3, 0.2], TheoryParams(2.0))
        with self.assertRaises(TheoryMismatch):
            find_witness(R3, other)


def _random_theory(rng):
    return TheoryParams(rng.uniform(0.1, 2.0), rng.uniform(-1.0, 1.0))


def _random_state(rng, theory, d):
    spectrum = Spectrum.from_arrays(rng.uniform(0, 1, d),
                                    rng.randint(0, 2, d))
    return QCState(spectrum, rng.dirichlet(np.ones(d)), theory)


class TestCriteriaAgree(TestCase):
    """
    Lorenz dominance, hinge dominance and the witness LP are three
    independent routes to the same order.
    """
    def test_constructed_comparable_pairs(self):
        rng = np.random.RandomState(7)
        for _ in range(250):
            theory = _random_theory(rng)
            d_r, d_s = rng.randint(2, 5), rng.randint(2, 5)
            source = _random_state(rng, theory, d_r)

            matrix = rng.uniform(0.05, 1.0, (d_s, d_r))
            matrix /= matrix.sum(axis=0)
            gibbs = matrix.dot(source.gibbs)
            spectrum = Spectrum.from_arrays(-np.log(gibbs) / theory.beta)
            target = QCState(spectrum, matrix.dot(source.probs), theory)

            assert equimajorizes(source, target)
            assert hinge_dominates(source, target)
            witness = find_witness(source, target)
            assert witness is not None
            assert verify_witness(witness, source, target)

    def test_independent_pairs(self):
        rng = np.random.RandomState(8)
        comparable = 0
        for _ in range(600):
            theory = _random_theory(rng)
            first = _random_state(rng, theory, rng.randint(1, 7))
            second = _random_state(rng, theory, rng.randint(1, 7))
            for source, target in ((first, second), (second, first)):
                lorenz = equimajorizes(source, target)
                self.assertEqual(lorenz, hinge_dominates(source, target))
                self.assertEqual(lorenz,
                                 find_witness(source, target) is not None)
                comparable += lorenz
        assert comparable > 0


class TestTypeTwoOracles(TestCase):
    def test_dual_certificate_r3(self):
        certificate = dual_certificate(R3, 0.1)
        assert is_dual_feasible(certificate, R3)
        self.assertAlmostEqual(5 / 6, dual_value(certificate, 0.1))

    def test_dual_at_eps_one(self):
        certificate = dual_certificate(R3, 1.0)
        self.assertEqual(0.0, certificate.mu)
        self.assertEqual(0.0, dual_value(certificate, 1.0))

    def assertRoutesAgree(self, state, eps):
        expected = type2_error(state, eps)
        certificate = dual_certificate(state, eps)
        assert is_dual_feasible(certificate, state)
        # the dual value carries rounding of order mu
        self.assertAlmostEqual(expected, dual_value(certificate, eps),
                               delta=1e-9 * max(1.0, certificate.mu))
        self.assertAlmostEqual(expected, bruteforce_type2_error(state, eps),
                               delta=1e-9)

    def test_three_routes_agree(self):
        rng = np.random.RandomState(5)
        for _ in range(1000):
            theory = _random_theory(rng)
            d = rng.randint(1, 11)
            spectrum = Spectrum.from_arrays(rng.uniform(0, 1, d),
                                            rng.randint(0, 2, d))
            probs = rng.dirichlet(np.ones(d))
            if d > 2 and rng.uniform() < 0.3:
                probs[rng.randint(d)] = 0.0
                probs /= probs.sum()
            state = QCState(spectrum, probs, theory)
            for eps in np.concatenate([[0.0, 1.0], rng.uniform(size=18)]):
                self.assertRoutesAgree(state, eps)

    def test_tiny_weight(self):
        spectrum = Spectrum.from_arrays([0.0] * 4)
        probs = np.array([5e-9, 0.5, 0.3, 0.2 - 5e-9])
        state = QCState(spectrum, probs, THEORY)
        self.assertAlmostEqual(1.0, type2_error(state, 0.0), delta=1e-15)
        # 3/5 of the tiny level is still accepted
        self.assertAlmostEqual(0.9, type2_error(state, 2e-9), delta=1e-12)
        for eps in (0.0, 1e-9, 2e-9, 5e-9, 1e-3):
            self.assertRoutesAgree(state, eps)

    def test_bruteforce_limit(self):
        state = QCState(Spectrum.from_arrays([0.0] * 15), np.ones(15) / 15,
                        THEORY)
        with self.assertRaises(ResourceLimit):
            bruteforce_type2_error(state, 0.1)
