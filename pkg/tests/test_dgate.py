import numpy as np
import pytest

from probclone.circuit import matrix
from probclone.dgate import (
    controlled_d,
    d_chain,
    d_multi,
    d_multi_chain,
    d_single,
)
from probclone.errors import DimensionError, DomainError
from probclone.statesets import StateSet, symmetric_pair, triangularize


def sym_state(theta):
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


def random_state_set(rng, k, n):
    dim = 1 << k
    cols = rng.standard_normal((dim, n)) + 1j * rng.standard_normal((dim, n))
    cols /= np.linalg.norm(cols, axis=0)
    return StateSet(cols)


def test_d_single_is_hermitian_involution():
    rng = np.random.default_rng(51)
    for _ in range(10):
        t1, t2 = rng.uniform(0.05, np.pi / 4, size=2)
        d = d_single(t1, t2).unitary
        assert np.max(np.abs(d - d.conj().T)) < 1e-12
        assert np.max(np.abs(d @ d - np.eye(4))) < 1e-12


def test_d_single_angle_law_and_action():
    t1, t2 = np.pi / 6, np.pi / 5
    spec = d_single(t1, t2)
    c3 = np.cos(2 * t1) * np.cos(2 * t2)
    assert abs(np.cos(2 * spec.theta3) - c3) < 1e-13
    e0 = np.array([1.0, 0.0], dtype=complex)
    for s1, s2 in ((1, 1), (-1, -1)):
        u = np.kron(sym_state(s1 * t1), sym_state(s2 * t2))
        v = np.kron(sym_state(s1 * spec.theta3), e0)
        assert np.max(np.abs(spec.unitary @ u - v)) < 1e-12
        assert np.max(np.abs(spec.unitary @ v - u)) < 1e-12


def test_d_single_domain():
    with pytest.raises(DomainError):
        d_single(-0.1, 0.2)
    with pytest.raises(DomainError):
        d_single(0.2, np.pi / 3)


def test_d_chain_angles_and_full_compression():
    theta = np.pi / 5
    copies = 4
    stages, theta_k = d_chain(theta, copies)
    assert len(stages) == copies - 1
    # angle recursion: after absorbing t copies the accumulator angle
    # satisfies cos(2 theta_t) = cos(2 theta)^t
    current = theta
    for stage in stages:
        assert stage.spec.theta1 == theta
        assert abs(stage.spec.theta2 - current) < 1e-15
        current = stage.spec.theta3
    assert current == theta_k
    assert abs(np.cos(2 * theta_k) - np.cos(2 * theta) ** copies) < 1e-13

    # apply the chain to |psi_+->^{otimes K}: order is stage t on parties
    # (K-t-1, K-t); the accumulator ends on party 0, blanks elsewhere
    for sign in (1, -1):
        amps = np.array([1.0], dtype=complex)
        for _ in range(copies):
            amps = np.kron(amps, sym_state(sign * theta))
        for stage in stages:
            lo = stage.parties[0]
            dim_pre = 1 << lo
            dim_post = 1 << (copies - lo - 2)
            block = np.kron(
                np.kron(np.eye(dim_pre), stage.spec.unitary), np.eye(dim_post)
            )
            amps = block @ amps
        want = np.zeros(1 << copies, dtype=complex)
        want[0] = np.cos(sign * theta_k)
        want[1 << (copies - 1)] = np.sin(sign * theta_k)
        assert np.max(np.abs(amps - want)) < 1e-12


def test_d_chain_needs_two_copies():
    with pytest.raises(DomainError):
        d_chain(np.pi / 6, 1)


def test_d_multi_moves_pair_coordinates():
    rng = np.random.default_rng(52)
    for k, n in ((1, 2), (2, 3), (2, 4)):
        s = random_state_set(rng, k, n)
        form = triangularize(s)
        spec = d_multi(form, form)
        dim = form.dim
        u = spec.unitary
        assert np.max(np.abs(u @ u.conj().T - np.eye(dim * dim))) < 1e-11
        sa = form.padded_columns()
        new = spec.result.padded_columns()
        e0 = np.zeros(dim, dtype=complex)
        e0[0] = 1.0
        for i in range(n):
            src = np.kron(sa[:, i], sa[:, i])
            dst = np.kron(new[:, i], e0)
            assert np.max(np.abs(u @ src - dst)) < 1e-10


def test_d_multi_gram_consistency():
    # the compressed coordinates must reproduce the entrywise product of
    # the two source Gram matrices
    rng = np.random.default_rng(53)
    s = random_state_set(rng, 2, 3)
    form = triangularize(s)
    spec = d_multi(form, form)
    t = spec.result.ttilde
    g1 = form.ttilde.conj().T @ form.ttilde
    assert np.max(np.abs(t.conj().T @ t - g1 * g1)) < 1e-11


def test_d_multi_dimension_mismatch():
    rng = np.random.default_rng(54)
    f1 = triangularize(random_state_set(rng, 1, 2))
    f2 = triangularize(random_state_set(rng, 2, 2))
    with pytest.raises(DimensionError):
        d_multi(f1, f2)


def test_d_multi_chain_compresses_copies():
    rng = np.random.default_rng(55)
    s = random_state_set(rng, 1, 2)
    form = triangularize(s)
    copies = 3
    stages, final = d_multi_chain(form, copies)
    assert len(stages) == copies - 1
    dim = form.dim
    cols = form.padded_columns()
    e0 = np.zeros(dim, dtype=complex)
    e0[0] = 1.0
    for i in range(s.n):
        amps = np.array([1.0], dtype=complex)
        for _ in range(copies):
            amps = np.kron(amps, cols[:, i])
        for stage in stages:
            lo = stage.parties[0]
            pre = dim**lo
            post = dim ** (copies - lo - 2)
            block = np.kron(np.kron(np.eye(pre), stage.spec.unitary), np.eye(post))
            amps = block @ amps
        want = np.kron(final.padded_columns()[:, i], np.kron(e0, e0))
        assert np.max(np.abs(amps - want)) < 1e-10
    none, same = d_multi_chain(form, 1)
    assert none == [] and same is form


def test_controlled_d_embeds_gate():
    spec = d_single(np.pi / 6, np.pi / 6)
    frag = controlled_d(spec, 2, 1)
    m = matrix(frag)
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    # probe is the last wire (least significant bit)
    want = np.kron(np.eye(4), p0) + np.einsum(
        "ij,kl->ikjl", spec.unitary, p1
    ).reshape(8, 8)
    assert np.max(np.abs(m - want)) < 1e-11
    frag0 = controlled_d(spec, 2, 0)
    want = np.kron(np.eye(4), p1) + np.einsum(
        "ij,kl->ikjl", spec.unitary, p0
    ).reshape(8, 8)
    assert np.max(np.abs(matrix(frag0) - want)) < 1e-11
    with pytest.raises(DimensionError):
        controlled_d(spec, 1, 1)
    with pytest.raises(DomainError):
        controlled_d(spec, 2, 2)
