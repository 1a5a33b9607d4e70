"""Entropy and mutual information against independent probability-formula
oracles, plus the algebraic properties the estimators must satisfy."""

import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from featsel.infotheory import (DiscreteVariable, conditional_entropy, entropy,
                                mutual_information)


# --- oracles: straight probability formulas, no shared code paths ---------

def oracle_entropy(values):
    n = len(values)
    return -sum((c / n) * math.log(c / n) for c in Counter(values).values())


def oracle_conditional_entropy(x, y):
    n = len(x)
    joint = Counter(zip(x, y))
    y_marg = Counter(y)
    h = 0.0
    for (xv, yv), c in joint.items():
        p_xy = c / n
        p_x_given_y = c / y_marg[yv]
        h -= p_xy * math.log(p_x_given_y)
    return h


def oracle_mutual_information(x, y):
    n = len(x)
    joint = Counter(zip(x, y))
    px = Counter(x)
    py = Counter(y)
    mi = 0.0
    for (xv, yv), c in joint.items():
        p_xy = c / n
        mi += p_xy * math.log(p_xy / ((px[xv] / n) * (py[yv] / n)))
    return mi


def random_pair(rng, max_symbols=10, max_samples=100):
    n = int(rng.integers(1, max_samples + 1))
    cx = int(rng.integers(1, max_symbols + 1))
    cy = int(rng.integers(1, max_symbols + 1))
    x = rng.integers(0, cx, size=n).astype(np.int64)
    y = rng.integers(0, cy, size=n).astype(np.int64)
    return x, y


class TestEntropy:
    def test_uniform_four_symbols(self):
        x = np.array([0, 1, 2, 3], dtype=np.int64)
        assert entropy(x) == pytest.approx(math.log(4), abs=1e-12)

    def test_constant_is_zero(self):
        assert entropy(np.zeros(17, dtype=np.int64)) == 0.0

    def test_matches_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            x, _ = random_pair(rng)
            assert entropy(x) == pytest.approx(oracle_entropy(x.tolist()), abs=1e-12)

    def test_accepts_discrete_variable(self):
        v = DiscreteVariable(values=np.array([0, 0, 1], dtype=np.int64),
                             cardinality=3)
        assert entropy(v) == pytest.approx(oracle_entropy([0, 0, 1]), abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            entropy(np.array([], dtype=np.int64))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            entropy(np.array([-1, 0], dtype=np.int64))


class TestConditionalEntropy:
    def test_determined_variable_is_zero(self):
        x = np.array([0, 1, 0, 1], dtype=np.int64)
        assert conditional_entropy(x, x) == 0.0

    def test_independent_uniform(self):
        # x independent of y: H(X|Y) = H(X)
        x = np.array([0, 1, 0, 1], dtype=np.int64)
        y = np.array([0, 0, 1, 1], dtype=np.int64)
        assert conditional_entropy(x, y) == pytest.approx(math.log(2), abs=1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            x, y = random_pair(rng)
            assert conditional_entropy(x, y) == pytest.approx(
                oracle_conditional_entropy(x.tolist(), y.tolist()), abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            conditional_entropy(np.array([0, 1], dtype=np.int64),
                                np.array([0], dtype=np.int64))

    def test_non_negative(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            x, y = random_pair(rng)
            assert conditional_entropy(x, y) >= 0.0


class TestMutualInformation:
    def test_identical_variables(self):
        x = np.array([0, 0, 1, 1, 2, 2], dtype=np.int64)
        assert mutual_information(x, x) == pytest.approx(entropy(x), abs=1e-12)

    def test_independent_variables(self):
        x = np.array([0, 0, 1, 1], dtype=np.int64)
        y = np.array([0, 1, 0, 1], dtype=np.int64)
        assert mutual_information(x, y) == pytest.approx(0.0, abs=1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            x, y = random_pair(rng)
            assert mutual_information(x, y) == pytest.approx(
                oracle_mutual_information(x.tolist(), y.tolist()), abs=1e-12)

    def test_symmetry_bounds_chain_rule(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            x, y = random_pair(rng)
            ixy = mutual_information(x, y)
            iyx = mutual_information(y, x)
            assert abs(ixy - iyx) <= 1e-12
            assert ixy >= 0.0
            assert ixy <= min(entropy(x), entropy(y)) + 1e-12
            # chain identity H(X) = I(X;Y) + H(X|Y)
            assert abs(entropy(x) - (ixy + conditional_entropy(x, y))) <= 1e-12

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)),
                    min_size=1, max_size=80))
    def test_properties_hypothesis(self, pairs):
        x = np.array([p[0] for p in pairs], dtype=np.int64)
        y = np.array([p[1] for p in pairs], dtype=np.int64)
        mi = mutual_information(x, y)
        assert mi >= 0.0
        assert abs(mi - mutual_information(y, x)) <= 1e-12
        assert mi <= min(entropy(x), entropy(y)) + 1e-12
        assert mi == pytest.approx(
            oracle_mutual_information(x.tolist(), y.tolist()), abs=1e-12)

    def test_relabeling_invariance(self):
        # permuting symbol identities cannot change information content
        rng = np.random.default_rng(5)
        x = rng.integers(0, 5, size=60).astype(np.int64)
        y = rng.integers(0, 4, size=60).astype(np.int64)
        perm = rng.permutation(5)
        assert mutual_information(perm[x], y) == pytest.approx(
            mutual_information(x, y), abs=1e-12)


class TestDiscreteVariable:
    def test_cardinality_validated(self):
        with pytest.raises(ValueError):
            DiscreteVariable(values=np.array([0, 3], dtype=np.int64), cardinality=3)

    def test_plain_vectors_accepted_everywhere(self):
        x = [0, 1, 1, 0]
        y = [1, 1, 0, 0]
        assert mutual_information(x, y) == pytest.approx(
            oracle_mutual_information(x, y), abs=1e-12)
