"""Information compression and decompression gates.

A D gate acts on two same-sized parties and concentrates the information
of a state family's product pair into the first party, leaving the
second party blank (|0...0>):

    D |psi_i>_a |psi_i>_b = |compressed_i>_a |0...0>_b

For the symmetric single-qubit pair |psi+-(t)> = cos t|0> +- sin t|1>
the gate is the Hermitian D(theta1, theta2) mapping
|psi+-(theta1)>|psi+-(theta2)> to |psi+-(theta3)>|0> with
cos 2theta3 = cos 2theta1 * cos 2theta2.  For general families the
multipartite D(theta~, xi~) maps coordinate columns t_i (x) s_i to
T(eta~) e_i (x) |0...0>, where T(eta~) is the upper-triangular factor
of the combined Gram matrix (elementwise product of the two Grams).

Chains of these gates compress K copies party by party; adjoint chains
decompress.  Everything here works in coordinate space: callers using
raw states apply the family's triangularizing rotation u0 per party
first (see the sim module).
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    InvariantError,
    RankError,
)
from .numerics import cholesky_psd, inverse, unitary_residual
from .statesets import TriangularForm

_GS_TOL = 1e-12


def _symmetric_state(theta):
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


@dataclass(frozen=True, eq=False)
class DGateSpec:
    """One compression gate: its unitary plus how it was derived.

    ``kind`` is "single" (symmetric-pair qubits, Hermitian involution,
    angles theta1/theta2 -> theta3) or "multi" (coordinate-space gate for
    a general family, with source forms and the resulting compressed
    form carrying T(eta~)).
    """

    kind: str
    unitary: np.ndarray
    theta1: Optional[float] = None
    theta2: Optional[float] = None
    theta3: Optional[float] = None
    form_a: Optional[TriangularForm] = None
    form_b: Optional[TriangularForm] = None
    result: Optional[TriangularForm] = None

    def __post_init__(self):
        u = np.array(self.unitary, dtype=complex)
        res = unitary_residual(u)
        if res > 1e-10:
            raise InvariantError("D gate unitary residual %.3g exceeds 1e-10" % res)
        if self.kind == "single":
            if np.abs(u - u.conj().T).max() > 1e-10:
                raise InvariantError("single-qubit D gate must be Hermitian")
            c3 = np.cos(2.0 * self.theta1) * np.cos(2.0 * self.theta2)
            if abs(np.cos(2.0 * self.theta3) - c3) > 1e-12:
                raise InvariantError("theta3 violates the angle product law")
            if not (-1e-12 <= self.theta3 <= np.pi / 4 + 1e-12):
                raise InvariantError("theta3 outside [0, pi/4]")
        elif self.kind != "multi":
            raise DomainError("kind must be 'single' or 'multi'")
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)

    @property
    def qubits_per_party(self):
        return ((self.unitary.shape[0] - 1).bit_length()) // 2

    def adjoint_unitary(self):
        return self.unitary.conj().T


def _gram_schmidt_completion(cols, dim, tol=_GS_TOL):
    """Extend orthonormal columns to a full basis using lexicographic
    basis vectors in index order (deterministic completion)."""
    basis = [np.array(c, dtype=complex) for c in cols]
    for i in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[i] = 1.0
        for b in basis:
            v = v - b * (b.conj() @ v)
        nrm = float(np.linalg.norm(v))
        if nrm > tol:
            basis.append(v / nrm)
        if len(basis) == dim:
            break
    if len(basis) != dim:
        raise RankError("orthonormal completion failed")
    return basis


def d_single(theta1, theta2):
    """Hermitian 4x4 gate compressing a symmetric qubit pair.

    Maps |psi+-(theta1)>|psi+-(theta2)> to |psi+-(theta3)>|0> with
    cos 2theta3 = cos 2theta1 cos 2theta2.  Built as the reflection
    through the bisector of the mapped pairs (identity minus twice the
    projector onto span{u_i - v_i}), which is Hermitian, involutive,
    and fixes the mapped states exactly.
    """
    for name, t in (("theta1", theta1), ("theta2", theta2)):
        if not (0.0 <= t <= np.pi / 4 + 1e-12):
            raise DomainError("%s = %.6g outside [0, pi/4]" % (name, t))
    c3 = np.cos(2.0 * theta1) * np.cos(2.0 * theta2)
    theta3 = 0.5 * np.arccos(np.clip(c3, -1.0, 1.0))
    blank = np.array([1.0, 0.0], dtype=complex)
    mapped = []
    for sign in (1.0, -1.0):
        a = _symmetric_state(sign * theta1)
        b = _symmetric_state(sign * theta2)
        c = _symmetric_state(sign * theta3)
        mapped.append((np.kron(a, b), np.kron(c, blank)))
    diffs = []
    for u_vec, v_vec in mapped:
        w = u_vec - v_vec
        for b in diffs:
            w = w - b * (b.conj() @ w)
        nrm = float(np.linalg.norm(w))
        if nrm > _GS_TOL:
            diffs.append(w / nrm)
    d_mat = np.eye(4, dtype=complex)
    for b in diffs:
        d_mat -= 2.0 * np.outer(b, b.conj())
    worst = max(
        float(np.abs(d_mat @ u_vec - v_vec).max()) for u_vec, v_vec in mapped
    )
    if worst > 1e-12:
        raise InvariantError("compression action residual %.3g exceeds 1e-12" % worst)
    return DGateSpec(
        kind="single",
        unitary=d_mat,
        theta1=float(theta1),
        theta2=float(theta2),
        theta3=float(theta3),
    )


@dataclass(frozen=True, eq=False)
class ChainStage:
    """One step of a compression chain: ``spec`` acting on party pair
    (parties[0] = accumulator-source slot, parties[1] = absorbed slot)."""

    parties: Tuple[int, int]
    spec: DGateSpec


def d_chain(theta1, copies):
    """Compression chain for ``copies`` symmetric-pair qubits.

    Returns (stages, theta_K).  Stages are in execution order; stage t
    (t = 1..K-1) applies D(theta1, theta_t) on parties
    (K-t-1, K-t), so information accumulates onto party 0 and
    cos 2theta_K = (cos 2theta1)^K.
    """
    if copies < 2:
        raise DomainError("chain needs at least 2 copies, got %d" % copies)
    if not (0.0 <= theta1 <= np.pi / 4 + 1e-12):
        raise DomainError("theta1 = %.6g outside [0, pi/4]" % theta1)
    stages = []
    current = float(theta1)
    for t in range(1, copies):
        spec = d_single(theta1, current)
        stages.append(ChainStage(parties=(copies - t - 1, copies - t), spec=spec))
        current = spec.theta3
    return stages, current


def d_multi(form_a, form_b):
    """Coordinate-space compression gate for two general families.

    Both forms must describe n-state families of the same party size.
    The combined Gram X = (Xa elementwise* Xb) factors as T(eta~)† T(eta~)
    with T upper triangular, positive diagonal; the returned gate D maps
    column_a_i (x) column_b_i to (T(eta~) e_i) (x) |0...0> and carries the
    compressed family as ``result`` (a TriangularForm with trivial
    rotation).  The free columns are completed deterministically by
    Gram-Schmidt over lexicographic basis vectors.
    """
    if form_a.n != form_b.n:
        raise DimensionError(
            "family sizes differ: %d vs %d" % (form_a.n, form_b.n)
        )
    if form_a.dim != form_b.dim:
        raise DimensionError(
            "party dimensions differ: %d vs %d" % (form_a.dim, form_b.dim)
        )
    n = form_a.n
    dim = form_a.dim
    sa = form_a.padded_columns()
    sb = form_b.padded_columns()
    x_comb = (sa.conj().T @ sa) * (sb.conj().T @ sb)
    x_comb = (x_comb + x_comb.conj().T) / 2.0
    w = np.linalg.eigvalsh(x_comb)
    if w[0] <= 1e-12:
        raise RankError(
            "combined family is numerically dependent (min eigenvalue %.3g)" % w[0]
        )
    t_eta = cholesky_psd(x_comb).conj().T
    g_cols = np.zeros((dim * dim, n), dtype=complex)
    for i in range(n):
        g_cols[:, i] = np.kron(sa[:, i], sb[:, i])
    omega = g_cols @ inverse(t_eta)
    placed = [omega[:, i] for i in range(n)]
    completion = _gram_schmidt_completion(placed, dim * dim)[n:]
    d_inv = np.zeros((dim * dim, dim * dim), dtype=complex)
    free_iter = iter(completion)
    for col in range(dim * dim):
        party0, party1 = divmod(col, dim)
        if party1 == 0 and party0 < n:
            d_inv[:, col] = placed[party0]
        else:
            d_inv[:, col] = next(free_iter)
    d_mat = d_inv.conj().T
    result = TriangularForm(np.eye(dim, dtype=complex), t_eta)
    return DGateSpec(
        kind="multi",
        unitary=d_mat,
        form_a=form_a,
        form_b=form_b,
        result=result,
    )


def d_multi_chain(form, copies):
    """Multipartite compression chain: stage t absorbs one fresh copy.

    Returns (stages, final_form).  Stage t (t = 1..K-1) applies
    d_multi(form, current) on parties (K-t-1, K-t); the accumulator ends
    on party 0 holding the final_form coordinates.  copies = 1 yields no
    stages and the input form unchanged.
    """
    if copies < 1:
        raise DomainError("copies must be at least 1")
    stages = []
    current = form
    for t in range(1, copies):
        spec = d_multi(form, current)
        stages.append(ChainStage(parties=(copies - t - 1, copies - t), spec=spec))
        current = spec.result
    return stages, current


def controlled_d(spec, probe_wire, active_value):
    """Probe-controlled wrapping of a D gate as a circuit fragment.

    Data wires are 0..2k-1 (the two parties); the probe must sit past
    them.  The fragment applies the gate's compiled circuit only when
    the probe holds ``active_value``.
    """
    from . import circuit as circ_mod

    if active_value not in (0, 1):
        raise DomainError("active value must be 0 or 1")
    data_wires = 2 * spec.qubits_per_party
    if probe_wire < data_wires:
        raise DimensionError(
            "probe wire %d collides with data wires 0..%d"
            % (probe_wire, data_wires - 1)
        )
    fragment = circ_mod.compile_unitary(spec.unitary)
    wide = circ_mod.remap_wires(fragment, list(range(data_wires)), probe_wire + 1)
    return circ_mod.with_controls(wide, {probe_wire: active_value})
