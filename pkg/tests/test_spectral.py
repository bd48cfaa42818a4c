import numpy as np
import pytest

import netpriv as npv
from netpriv import MultiplicityBoundExceeded, NotDiagonalizable
from netpriv.numerics import numerical_rank
from support import EXAMPLE_A, example_spectrum, oneb, random_diagonalizable


def test_example_spectrum_values_and_supports():
    spectrum = example_spectrum()
    assert spectrum.n == 6 and spectrum.diagonalizable
    by_value = {s.value.real: s for s in spectrum.spaces}
    assert set(by_value) == {1, 2, 4, 5, 6, 9}
    assert all(s.multiplicity == 1 for s in spectrum.spaces)
    expected = {
        1: [1, 2, 3, 4, 5, 6],
        5: [2, 5, 6],
        4: [2, 3, 5, 6],
        2: [4, 5, 6],
        6: [5, 6],
        9: [6],
    }
    for value, support in expected.items():
        assert oneb(by_value[value].support) == support


def test_identity_spectrum_single_space():
    spectrum = npv.compute_spectrum(np.eye(3))
    assert len(spectrum.spaces) == 1
    space = spectrum.spaces[0]
    assert space.value == 1 and space.multiplicity == 3
    assert space.support == frozenset({0, 1, 2})


def test_jordan_block_is_rejected():
    with pytest.raises(NotDiagonalizable):
        npv.compute_spectrum(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_multiplicity_cap():
    with pytest.raises(MultiplicityBoundExceeded):
        npv.compute_spectrum(np.eye(5), multiplicity_cap=4)
    spectrum = npv.compute_spectrum(np.eye(5), multiplicity_cap=5)
    assert spectrum.max_multiplicity == 5


def test_eigenbasis_support_matches_field():
    spectrum = example_spectrum()
    for space in spectrum.spaces:
        assert npv.eigenbasis_support(space) == space.support


def test_residuals_small():
    spectrum = example_spectrum()
    for space in spectrum.spaces:
        residual = (EXAMPLE_A - space.value * np.eye(6)) @ space.basis
        assert np.max(np.abs(residual)) < 1e-8 * np.linalg.norm(EXAMPLE_A)


def test_rank_bridge_identity():
    # rank [A - lam I; I^S] == n - k_i + rank of the eigenbasis rows in S
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(3, 7))
        a, spectrum = random_diagonalizable(rng, n)
        s = sorted(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False))
        rows = np.eye(n)[s]
        for space in spectrum.spaces:
            stack = np.vstack([a - space.value * np.eye(n), rows])
            left = numerical_rank(stack)
            right = n - space.multiplicity + numerical_rank(space.basis[s, :])
            assert left == right


def test_conjugate_spaces_have_equal_restricted_ranks():
    rng = np.random.default_rng(5)
    found = 0
    while found < 5:
        n = int(rng.integers(3, 7))
        a, spectrum = random_diagonalizable(rng, n)
        for i, space in enumerate(spectrum.spaces):
            j = space.conjugate_partner
            if j is None or j < i:
                continue
            other = spectrum.spaces[j]
            assert abs(space.value.conjugate() - other.value) < 1e-6
            assert space.multiplicity == other.multiplicity
            for _ in range(4):
                s = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
                assert numerical_rank(space.basis[s, :]) == numerical_rank(other.basis[s, :])
            found += 1


def test_bases_jointly_span():
    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(3, 7))
        a, spectrum = random_diagonalizable(rng, n)
        assembled = np.hstack([space.basis for space in spectrum.spaces])
        assert numerical_rank(assembled) == n


def test_cluster_representatives_stay_separated():
    rng = np.random.default_rng(25)
    for _ in range(15):
        n = int(rng.integers(3, 7))
        a, spectrum = random_diagonalizable(rng, n)
        radius = npv.DEFAULT_TOL.cluster_rel * np.linalg.norm(a)
        values = [s.value for s in spectrum.spaces]
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                assert abs(values[i] - values[j]) > radius


def test_repeated_eigenvalue_cluster_width():
    # block-diagonal similarity with a doubled eigenvalue
    from support import repeated_eigenvalue_instance

    rng = np.random.default_rng(21)
    a, spectrum = repeated_eigenvalue_instance(rng, 5)
    assert spectrum.diagonalizable
    assert spectrum.max_multiplicity == 2
    assert sum(s.multiplicity for s in spectrum.spaces) == 5
