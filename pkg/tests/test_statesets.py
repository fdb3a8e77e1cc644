import numpy as np
import pytest

from probclone.errors import DimensionError, DomainError, RankError
from probclone.statesets import (
    StateSet,
    gram,
    symmetric_pair,
    triangularize,
)


def random_state_set(rng, k, n):
    dim = 1 << k
    cols = rng.standard_normal((dim, n)) + 1j * rng.standard_normal((dim, n))
    cols /= np.linalg.norm(cols, axis=0)
    return StateSet(cols)


def test_state_set_basic_properties():
    rng = np.random.default_rng(21)
    s = random_state_set(rng, 2, 3)
    assert s.k == 2 and s.n == 3
    assert len(s.labels) == 3
    for i in range(3):
        v = s.state(i)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12
        first = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
        assert abs(first.imag) < 1e-12 and first.real > 0.0


def test_state_set_rejects_unnormalized():
    with pytest.raises(DomainError):
        StateSet(np.array([[2.0], [0.0]], dtype=complex))


def test_state_set_rejects_dependent_states():
    c = np.array([[1.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(RankError):
        StateSet(c)


def test_state_set_rejects_bad_dimension():
    c = np.ones((3, 1), dtype=complex) / np.sqrt(3.0)
    with pytest.raises(DimensionError):
        StateSet(c)


def test_state_set_label_count_checked():
    c = np.eye(2, dtype=complex)
    with pytest.raises(DimensionError):
        StateSet(c, labels=["only-one"])


def test_symmetric_pair_overlap():
    for theta in (np.pi / 12, np.pi / 8, np.pi / 6, np.pi / 5):
        s = symmetric_pair(theta)
        assert s.k == 1 and s.n == 2
        overlap = np.vdot(s.state(0), s.state(1))
        assert abs(overlap - np.cos(2.0 * theta)) < 1e-14
    with pytest.raises(DomainError):
        symmetric_pair(0.0)
    with pytest.raises(DomainError):
        symmetric_pair(np.pi / 2)


def test_gram_entries_are_overlap_powers():
    rng = np.random.default_rng(22)
    s = random_state_set(rng, 2, 3)
    for m in (1, 2, 4):
        x = gram(s, m)
        for i in range(3):
            for j in range(3):
                expect = np.vdot(s.state(i), s.state(j)) ** m
                assert abs(x[i, j] - expect) < 1e-12
        assert np.max(np.abs(x - x.conj().T)) < 1e-14
        assert np.linalg.eigvalsh(x)[0] > -1e-12
    with pytest.raises(DomainError):
        gram(s, 0)


def test_triangularize_produces_triangular_coordinates():
    rng = np.random.default_rng(23)
    for k, n in ((1, 2), (2, 3), (2, 4)):
        s = random_state_set(rng, k, n)
        form = triangularize(s)
        dim = 1 << k
        assert form.dim == dim and form.n == n
        assert np.max(np.abs(form.u0 @ form.u0.conj().T - np.eye(dim))) < 1e-12
        padded = form.padded_columns()
        assert padded.shape == (dim, n)
        for i in range(n):
            assert np.max(np.abs(form.u0 @ s.state(i) - padded[:, i])) < 1e-12
        for i in range(n):
            for j in range(i):
                assert abs(form.ttilde[i, j]) < 1e-12
            assert form.ttilde[i, i].real > 0.0
            assert abs(form.ttilde[i, i].imag) < 1e-12


def test_triangularize_symmetric_pair_angles():
    theta = np.pi / 6
    form = triangularize(symmetric_pair(theta))
    t = form.ttilde
    assert abs(t[0, 0] - np.cos(theta)) < 1e-12 or abs(t[0, 0] - 1.0) < 1e-12
    overlap = np.vdot(form.padded_columns()[:, 0], form.padded_columns()[:, 1])
    assert abs(overlap - np.cos(2.0 * theta)) < 1e-12
