"""Machine synthesis: feasibility, coefficients, the block unitary, and
its Hamiltonian.

Given a state family and target success probabilities, the machine is a
2n x 2n unitary acting on (label coordinates) x (probe).  Reading U in
2x2 blocks of n x n matrices,

    U = [[V F V†, -V E V†],
         [V E V†,  V F V†]]

with E = diag(sqrt(m_i)), F = diag(sqrt(1 - m_i)).  The m_i spectrum and
the rotation V come from the input/output coordinate matrices: with
A† A = X^(M) (input Gram) and G = sqrt(Gamma) X_out sqrt(Gamma) (output
Gram scaled by the success amplitudes), the matrix J = G^(1/2) gives

    Y = J (X^(M))^-1 J†,   Y = V diag(m) V†.

The machine is feasible exactly when every m_i lies in (0, 1].

The factor pairs (C, A) that appear in the machine equation are only
determined up to a right-unitary gauge; this module fixes the gauge so
that the block identities U00 A = C† and U10 A = A_out sqrt(Gamma) hold
literally for the stored matrices:

    A     = V E^-1 V† J          (input coordinates,  A† A = X^(M))
    A_out = J sqrt(Gamma)^-1     (output coordinates, A_out† A_out = X_out)
    C     = A† V F V†            (failure coefficients, C C† = X^(M) - G)

In identification mode X_out = I, so J = sqrt(Gamma) and A_out = I: the
success branch lands on plain computational label coordinates.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .errors import DomainError, InvariantError, NotPSDError, SingularError
from .numerics import (
    DEFAULT_TOL,
    cholesky_psd,
    expi_hermitian,
    hermitian_eigen,
    inverse,
    unitary_residual,
)
from .statesets import gram

FEASIBILITY_TOL = 1e-10


@dataclass(frozen=True)
class Identify:
    """Identification mode: M copies are consumed to name the input state."""

    copies: int

    def __post_init__(self):
        if self.copies < 1:
            raise DomainError("copy count must be at least 1")


@dataclass(frozen=True)
class Clone:
    """Cloning mode: M input copies are expanded to N output copies."""

    copies_in: int
    copies_out: int

    def __post_init__(self):
        if self.copies_in < 1:
            raise DomainError("input copy count must be at least 1")
        if self.copies_out <= self.copies_in:
            raise DomainError(
                "output copies (%d) must exceed input copies (%d)"
                % (self.copies_out, self.copies_in)
            )


@dataclass(frozen=True)
class MachineSpec:
    """Problem statement: mode plus one success probability per state.

    Probabilities must lie in (0, 1]; a zero entry is rejected because the
    synthesis needs the inverse success amplitudes.  Use ``validated`` to
    additionally require feasibility against a concrete state family.
    """

    mode: object
    gammas: Tuple[float, ...]

    def __post_init__(self):
        if not isinstance(self.mode, (Identify, Clone)):
            raise DomainError("mode must be Identify or Clone")
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        for i, g in enumerate(self.gammas):
            if not (0.0 < g <= 1.0):
                raise DomainError(
                    "gamma[%d] = %.6g outside (0, 1]; zero probabilities are "
                    "not representable" % (i, g)
                )

    @classmethod
    def validated(cls, state_set, mode, gammas):
        """Construct a spec and require feasibility for ``state_set``."""
        spec = cls(mode, tuple(gammas))
        if len(spec.gammas) != state_set.n:
            raise DomainError(
                "expected %d probabilities, got %d" % (state_set.n, len(spec.gammas))
            )
        verdict = feasibility(state_set, spec)
        if not verdict.feasible:
            raise NotPSDError(
                verdict.min_eigenvalue,
                "requested probabilities are infeasible "
                "(residual eigenvalue %.6g)" % verdict.min_eigenvalue,
            )
        return spec


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    min_eigenvalue: float


@dataclass(frozen=True)
class SynthesisResult:
    """Everything derived from one feasible problem.

    ``a`` maps label coordinates to input (M-copy) coordinates, ``a_out``
    to output coordinates; ``c`` holds the failure-branch coefficients;
    ``u`` is the 2n x 2n machine unitary and ``o`` its diagonalizing
    rotation, with eigenphase angles ``thetas``; ``note`` names the output
    basis convention ("identification" or "cloning").
    """

    c: np.ndarray
    a: np.ndarray
    a_out: np.ndarray
    v: np.ndarray
    m: np.ndarray
    thetas: np.ndarray
    u: np.ndarray
    o: np.ndarray
    note: str
    gammas: Tuple[float, ...]
    mode: object = field(repr=False)

    @property
    def n(self):
        return self.v.shape[0]


@dataclass(frozen=True)
class HamiltonianSpec:
    """Hermitian generator with exp(-1j * h * dt / hbar) equal to the machine."""

    h: np.ndarray
    energies: np.ndarray
    branch_integers: Tuple[int, ...]
    hbar: float = 1.0
    dt: float = 1.0


def _copy_counts(spec):
    if isinstance(spec.mode, Identify):
        return spec.mode.copies, None
    return spec.mode.copies_in, spec.mode.copies_out


def residual_matrix(state_set, spec):
    """The PSD feasibility residual: X^(M) - Gamma, or X^(M) - sqrt(Gamma) X^(N) sqrt(Gamma)."""
    if len(spec.gammas) != state_set.n:
        raise DomainError(
            "expected %d probabilities, got %d" % (state_set.n, len(spec.gammas))
        )
    m_in, n_out = _copy_counts(spec)
    x_m = gram(state_set, m_in)
    if n_out is None:
        r = x_m - np.diag(np.asarray(spec.gammas, dtype=float))
    else:
        sg = np.sqrt(np.asarray(spec.gammas, dtype=float))
        r = x_m - (sg[:, None] * gram(state_set, n_out)) * sg[None, :]
    return (r + r.conj().T) / 2.0


def feasibility(state_set, spec, tol=FEASIBILITY_TOL):
    """Eigenvalue verdict on the feasibility residual."""
    r = residual_matrix(state_set, spec)
    w, _ = hermitian_eigen(r, tol=DEFAULT_TOL)
    return Feasibility(bool(w[0] >= -tol), float(w[0]))


def optimal_uniform_gamma(state_set, mode, tol=FEASIBILITY_TOL):
    """Largest g such that gamma_i = g for all i is feasible, by bisection.

    The bisection predicate uses a tolerance far below ``tol`` so the
    returned value sits within ~1e-13 of the true boundary rather than
    being biased upward by the acceptance slack; the result is always
    feasible under ``tol`` itself.
    """
    n = state_set.n
    inner = min(float(tol), 1e-13)

    def ok(g):
        spec = MachineSpec(mode, (g,) * n)
        return feasibility(state_set, spec, tol=inner).feasible

    if ok(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2.0
        if mid <= 0.0:
            break
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def coefficients(state_set, spec, tol=DEFAULT_TOL):
    """Lower-triangular C with C C† equal to the feasibility residual.

    This is the deterministic triangular representative of the coefficient
    matrix; ``build_unitary`` stores the gauge-aligned representative
    instead (same C C†).
    """
    return cholesky_psd(residual_matrix(state_set, spec), tol=tol)


def _sqrt_psd(a, tol=DEFAULT_TOL):
    w, q = hermitian_eigen((a + a.conj().T) / 2.0, tol=tol)
    if w[0] < -1e-9:
        raise NotPSDError(w[0])
    return (q * np.sqrt(np.clip(w, 0.0, None))) @ q.conj().T


def build_unitary(state_set, spec, tol=DEFAULT_TOL):
    """Synthesize the machine unitary and its gauge-aligned factors."""
    verdict = feasibility(state_set, spec)
    if not verdict.feasible:
        raise NotPSDError(
            verdict.min_eigenvalue,
            "infeasible problem (residual eigenvalue %.6g)" % verdict.min_eigenvalue,
        )

    n = state_set.n
    m_in, n_out = _copy_counts(spec)
    sg = np.sqrt(np.asarray(spec.gammas, dtype=float))
    x_m = gram(state_set, m_in)
    if n_out is None:
        note = "identification"
        j_mat = np.diag(sg).astype(complex)
        a_out = np.eye(n, dtype=complex)
    else:
        note = "cloning"
        x_n = gram(state_set, n_out)
        j_mat = _sqrt_psd((sg[:, None] * x_n) * sg[None, :], tol=tol)
        a_out = j_mat @ np.diag(1.0 / sg)

    x_inv = inverse(x_m)
    y = j_mat @ x_inv @ j_mat.conj().T
    w, q = hermitian_eigen((y + y.conj().T) / 2.0, tol=tol)
    m_vals = w[::-1].copy()
    v = q[:, ::-1].copy()
    if m_vals[-1] <= 1e-14:
        raise SingularError(
            "success probabilities too small to synthesize at double precision"
        )
    if m_vals[0] > 1.0 + 1e-8:
        raise NotPSDError(
            1.0 - m_vals[0], "infeasible problem (m exceeds 1 by %.3g)" % (m_vals[0] - 1.0)
        )
    m_vals = np.clip(m_vals, 0.0, 1.0)
    # Exact arithmetic bounds these eigenvalues by 1; values within solver
    # noise of 1 belong to the no-failure subspace, where the rotation angle
    # is exactly a quarter turn.  Snapping avoids sqrt-amplified noise there.
    m_vals[m_vals > 1.0 - 1e-13] = 1.0

    e_diag = np.sqrt(m_vals)
    f_diag = np.sqrt(1.0 - m_vals)
    vh = v.conj().T
    a_in = (v * (1.0 / e_diag)) @ vh @ j_mat
    c = a_in.conj().T @ (v * f_diag) @ vh

    zero = np.zeros((n, n), dtype=complex)
    vt = np.block([[v, zero], [zero, v]])
    s_mat = np.block(
        [[np.diag(f_diag), -np.diag(e_diag)], [np.diag(e_diag), np.diag(f_diag)]]
    ).astype(complex)
    u = vt @ s_mat @ vt.conj().T

    thetas = np.arctan2(e_diag, f_diag)
    o = _diagonalizer(v, n)

    _check_blocks(u, a_in, a_out, c, sg, n)
    res = SynthesisResult(
        c=c,
        a=a_in,
        a_out=a_out,
        v=v,
        m=m_vals,
        thetas=thetas,
        u=u,
        o=o,
        note=note,
        gammas=spec.gammas,
        mode=spec.mode,
    )
    for arr in (res.c, res.a, res.a_out, res.v, res.m, res.thetas, res.u, res.o):
        arr.setflags(write=False)
    return res


def _diagonalizer(v, n):
    """O = blockdiag(V, V) @ T @ Ltilde, the rotation that diagonalizes U."""
    t_perm = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        for b in (0, 1):
            t_perm[j + b * n, 2 * j + b] = 1.0
    l_block = np.array([[1.0, -1.0j], [-1.0j, 1.0]], dtype=complex) / np.sqrt(2.0)
    l_tilde = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        l_tilde[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = l_block
    zero = np.zeros((n, n), dtype=complex)
    vt = np.block([[v, zero], [zero, v]])
    return vt @ t_perm @ l_tilde


def _check_blocks(u, a_in, a_out, c, sg, n):
    res_unitary = unitary_residual(u)
    if res_unitary > 1e-9:
        raise InvariantError("machine unitary residual %.3g exceeds 1e-9" % res_unitary)
    top = float(np.abs(u[:n, :n] @ a_in - c.conj().T).max())
    bottom = float(np.abs(u[n:, :n] @ a_in - a_out * sg[None, :]).max())
    if top > 1e-8 or bottom > 1e-8:
        raise InvariantError(
            "block identities violated (top %.3g, bottom %.3g)" % (top, bottom)
        )


def diagonalize(result, tol=DEFAULT_TOL):
    """Return (O, phases) with U = O diag(exp(1j*phases)) O†.

    Phases are interleaved (+theta_1, -theta_1, ..., +theta_n, -theta_n).
    """
    n = result.n
    phases = np.empty(2 * n, dtype=float)
    phases[0::2] = result.thetas
    phases[1::2] = -result.thetas
    o = result.o
    recon = (o * np.exp(1j * phases)) @ o.conj().T
    err = float(np.abs(recon - result.u).max())
    if err > 1e-9:
        raise InvariantError("diagonalization residual %.3g exceeds 1e-9" % err)
    return o, phases


def hamiltonian(result, branch_integers=None):
    """Hermitian H with exp(-1j H) equal to the machine unitary.

    ``branch_integers`` supplies the 2n integers that shift each energy by
    a multiple of 2*pi (ordered like the interleaved phases); the default
    of all zeros gives the minimal-spectral-radius generator.
    """
    n = result.n
    if branch_integers is None:
        branch_integers = (0,) * (2 * n)
    branch_integers = tuple(int(b) for b in branch_integers)
    if len(branch_integers) != 2 * n:
        raise DomainError(
            "expected %d branch integers, got %d" % (2 * n, len(branch_integers))
        )
    o, phases = diagonalize(result)
    # exp(-1j*E) must reproduce exp(1j*phase): E = -phase + 2*pi*integer.
    energies = -phases + 2.0 * np.pi * np.asarray(branch_integers, dtype=float)
    h = (o * energies) @ o.conj().T
    h = (h + h.conj().T) / 2.0
    recon = expi_hermitian(h, 1.0)
    err = float(np.abs(recon - result.u).max())
    if err > 1e-8:
        raise InvariantError("Hamiltonian round trip residual %.3g exceeds 1e-8" % err)
    h.setflags(write=False)
    energies.setflags(write=False)
    return HamiltonianSpec(h=h, energies=energies, branch_integers=branch_integers)
