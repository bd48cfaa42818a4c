import numpy as np
import pytest

import netpriv as npv
from netpriv import DimensionMismatch, MeasurementSpec, SystemInstance, ZeroFunctional
from support import (
    EXAMPLE_A,
    EXAMPLE_F_CLUSTER,
    EXAMPLE_F_TARGETS,
    example_instance,
    example_spectrum,
    random_diagonalizable,
)


@pytest.fixture(scope="module")
def spectrum():
    return example_spectrum()


def test_zero_functional_rejected():
    with pytest.raises(ZeroFunctional):
        SystemInstance(np.eye(2), np.array([[0.0, 0.0]]))


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        SystemInstance(np.eye(2), np.array([[1.0, 0.0, 0.0]]))
    with pytest.raises(ValueError):
        MeasurementSpec()
    with pytest.raises(DimensionMismatch):
        MeasurementSpec.from_blocked({7}).output_rows(3)


def test_full_measurement_observable(spectrum):
    cert = npv.is_functionally_observable(
        EXAMPLE_A, MeasurementSpec.from_blocked(()), np.eye(6), spectrum
    )
    assert cert.observable
    assert all(p.rank_with_functional == 6 for p in cert.pairs)


def test_blocking_last_node_hides_full_state(spectrum):
    cert = npv.is_functionally_observable(
        EXAMPLE_A, MeasurementSpec.from_blocked({5}), np.eye(6), spectrum
    )
    assert not cert.observable
    violating = [cert.pairs[i].eigenvalue for i in cert.violations]
    assert violating == [9]


def test_observable_despite_one_blocked_node(spectrum):
    cert = npv.is_functionally_observable(
        EXAMPLE_A, MeasurementSpec.from_blocked({4}), EXAMPLE_F_TARGETS, spectrum
    )
    assert cert.observable


def test_vector_protection_cases(spectrum):
    full = example_instance()
    assert npv.is_vector_protected(full, {5}, spectrum)
    assert not npv.is_vector_protected(full, set(), spectrum)
    cluster = example_instance(EXAMPLE_F_CLUSTER)
    assert npv.is_vector_protected(cluster, {3, 4, 5}, spectrum)


def test_entry_protection_cases(spectrum):
    targets = example_instance(EXAMPLE_F_TARGETS)
    assert npv.is_entry_protected(targets, {1, 2, 3, 4, 5}, spectrum) == (True, True, True)
    # blocking only the last two nodes hides x5 but leaves x3, x4 inferable
    assert npv.is_entry_protected(targets, {4, 5}, spectrum) == (False, False, True)
    assert all(npv.is_entry_protected(targets, range(6), spectrum))


def test_classical_observability_small_cases():
    assert npv.is_observable_classical(np.diag([1.0, 2.0]), np.eye(2))
    assert not npv.is_observable_classical(np.eye(2), np.array([[1.0, 0.0]]))
    assert not npv.is_observable_classical(EXAMPLE_A, np.eye(6)[:5])


def test_full_state_functional_matches_classical_test():
    rng = np.random.default_rng(31)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        a, spectrum = random_diagonalizable(rng, n)
        p = int(rng.integers(1, n + 1))
        c = rng.integers(-2, 3, size=(p, n)).astype(float)
        cert = npv.is_functionally_observable(
            a, MeasurementSpec.from_matrix(c), np.eye(n), spectrum
        )
        assert cert.observable == npv.is_observable_classical(a, c)


def test_monotonicity_in_measured_nodes():
    rng = np.random.default_rng(37)
    for _ in range(25):
        n = int(rng.integers(3, 7))
        a, spectrum = random_diagonalizable(rng, n)
        f = np.atleast_2d(rng.integers(-2, 3, size=(1, n)).astype(float))
        if not np.any(f):
            continue
        big = set(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
        small = {i for i in big if rng.integers(2)}
        instance = SystemInstance(a, f)
        # blocking a superset can only keep or gain protection
        if npv.is_vector_protected(instance, small, spectrum):
            assert npv.is_vector_protected(instance, big, spectrum)


def test_monotonicity_in_functional_rows():
    rng = np.random.default_rng(41)
    for _ in range(25):
        n = int(rng.integers(3, 7))
        a, spectrum = random_diagonalizable(rng, n)
        f = rng.integers(-2, 3, size=(3, n)).astype(float)
        if not np.all(np.any(f != 0, axis=1)):
            continue
        blocked = set(rng.choice(n, size=int(rng.integers(0, n)), replace=False))
        c = MeasurementSpec.from_blocked(blocked)
        whole = npv.is_functionally_observable(a, c, f, spectrum).observable
        if whole:
            for keep in ([0], [1], [2], [0, 2]):
                assert npv.is_functionally_observable(a, c, f[keep], spectrum).observable


def test_certificate_violations_recompute(spectrum):
    from netpriv.numerics import numerical_rank

    cert = npv.is_functionally_observable(
        EXAMPLE_A, MeasurementSpec.from_blocked({5}), np.eye(6), spectrum
    )
    assert not cert.observable
    for idx in cert.violations:
        lam = spectrum.spaces[idx].value
        rows = np.eye(6)[:5]
        base = np.vstack([EXAMPLE_A - lam * np.eye(6), rows])
        with_f = np.vstack([base, np.eye(6)])
        assert numerical_rank(with_f) > numerical_rank(base)
