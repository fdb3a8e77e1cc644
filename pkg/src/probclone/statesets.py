"""Linearly independent state families and their canonical triangular form.

A StateSet holds n unit vectors on k qubits, with n never exceeding 2**k
because the family must be linearly independent.  Each state is stored with
a fixed global-phase convention (first nonzero coefficient real positive)
so that every matrix derived from the family is reproducible.

The triangular form rewrites the family over an orthonormal basis obtained
by Gram-Schmidt: after a basis rotation u0, state i has coordinates given
by column i of an upper-triangular matrix with positive diagonal.  Those
coordinates are the natural frame for the multipartite compression gates.
"""

import numpy as np

from .errors import DimensionError, DomainError, RankError
from .numerics import DEFAULT_TOL, hermitian_eigen

_PHASE_EPS = 1e-12
_NORM_SLACK = 1e-6
_INDEPENDENCE_EPS = 1e-10


def _canonical_phase(vec):
    """Scale a vector so its first coefficient above 1e-12 is real positive."""
    for entry in vec:
        if abs(entry) > _PHASE_EPS:
            return vec * (np.conj(entry) / abs(entry))
    return vec


class StateSet:
    """Immutable family of n linearly independent unit vectors on k qubits.

    Parameters
    ----------
    states : array-like, shape (2**k, n)
        State coordinates, one column per state, in the lexicographic
        computational basis (wire 0 is the most significant bit).
    labels : sequence of str, optional
        One identifier per state; defaults to "psi0", "psi1", ...
    """

    def __init__(self, states, labels=None):
        mat = np.asarray(states, dtype=complex)
        if mat.ndim != 2:
            raise DimensionError("states must form a (dim, n) matrix")
        dim, n = mat.shape
        k = int(dim).bit_length() - 1
        if dim != 2 ** k or dim < 2:
            raise DimensionError("state dimension %d is not a power of two" % dim)
        if n < 1 or n > dim:
            raise RankError("%d states cannot be independent in dimension %d" % (n, dim))

        mat = mat.copy()
        for j in range(n):
            norm = float(np.linalg.norm(mat[:, j]))
            if abs(norm - 1.0) > _NORM_SLACK:
                raise DomainError("state %d has norm %.6g, expected 1" % (j, norm))
            mat[:, j] = _canonical_phase(mat[:, j] / norm)

        gram1 = mat.conj().T @ mat
        w, _ = hermitian_eigen((gram1 + gram1.conj().T) / 2.0, tol=DEFAULT_TOL)
        if w[0] < _INDEPENDENCE_EPS:
            raise RankError(
                "states are linearly dependent (smallest Gram eigenvalue %.3g)" % w[0]
            )

        if labels is None:
            labels = tuple("psi%d" % j for j in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise DimensionError("expected %d labels, got %d" % (n, len(labels)))

        self.k = k
        self.n = n
        self.dim = dim
        self.labels = labels
        self._states = mat
        self._states.setflags(write=False)

    @property
    def states(self):
        """The (dim, n) coordinate matrix, one column per state (read-only)."""
        return self._states

    def state(self, i):
        return self._states[:, i].copy()

    def __repr__(self):
        return "StateSet(k=%d, n=%d)" % (self.k, self.n)


def symmetric_pair(theta):
    """The pair cos(t)|0> + sin(t)|1>, cos(t)|0> - sin(t)|1> with overlap cos(2t).

    ``theta`` must lie in (0, pi/4]; theta = 0 would make the two states
    coincide and theta = pi/4 gives an orthogonal pair.
    """
    if not (0.0 <= theta <= np.pi / 4 + 1e-12):
        raise DomainError("theta %.6g outside [0, pi/4]" % theta)
    if theta <= 0.0:
        raise DomainError("theta = 0 gives a degenerate (linearly dependent) pair")
    c, s = np.cos(theta), np.sin(theta)
    return StateSet(np.array([[c, c], [s, -s]], dtype=complex))


def gram(state_set, m):
    """Gram matrix of the m-copy states: entries <psi_i|psi_j> ** m.

    The diagonal is set to exactly 1, which it equals by definition.
    """
    if m < 1:
        raise DomainError("copy count must be at least 1, got %d" % m)
    base = state_set.states.conj().T @ state_set.states
    x = np.ones_like(base)
    for _ in range(int(m)):
        x = x * base
    np.fill_diagonal(x, 1.0)
    return x


class TriangularForm:
    """Result of rotating a state family onto upper-triangular coordinates.

    Attributes
    ----------
    u0 : (dim, dim) unitary basis rotation.
    ttilde : (n, n) upper-triangular coordinates with positive diagonal;
        u0 @ states equals the first n computational basis vectors times
        ttilde, column by column.
    """

    def __init__(self, u0, ttilde):
        self.u0 = np.asarray(u0, dtype=complex)
        self.ttilde = np.asarray(ttilde, dtype=complex)
        self.u0.setflags(write=False)
        self.ttilde.setflags(write=False)

    @property
    def n(self):
        return self.ttilde.shape[0]

    @property
    def dim(self):
        return self.u0.shape[0]

    def padded_columns(self):
        """(dim, n) coordinate columns: ttilde extended with zero rows."""
        out = np.zeros((self.dim, self.n), dtype=complex)
        out[: self.n, :] = self.ttilde
        return out

    def angles(self):
        """Spherical-coordinate view of each column of ttilde.

        Column i with entries t_0 .. t_i is parametrized as
        t_j = exp(1j*mu_j) * cos(theta_j) * prod(sin(theta_l) for l < j)
        with the final entry t_i = prod(sin(theta_l)), real positive.
        Returns a list of (thetas, mus) pairs, one per column.
        """
        out = []
        for i in range(self.n):
            col = self.ttilde[: i + 1, i]
            thetas = []
            mus = []
            rem = 1.0
            for entry in col[:-1]:
                mag = abs(entry)
                ratio = 0.0 if rem < 1e-14 else min(max(mag / rem, 0.0), 1.0)
                th = float(np.arccos(ratio))
                thetas.append(th)
                mus.append(float(np.angle(entry)) if mag > 1e-14 else 0.0)
                rem *= np.sin(th)
            out.append((thetas, mus))
        return out


def triangularize(state_set, tol=DEFAULT_TOL):
    """Gram-Schmidt the family into a TriangularForm.

    The returned rotation u0 maps state i onto the first n computational
    coordinates, where it reads as column i of ttilde; ttilde† ttilde
    reproduces the single-copy Gram matrix.
    """
    mat = state_set.states
    dim, n = mat.shape
    basis = []
    ttilde = np.zeros((n, n), dtype=complex)
    for j in range(n):
        v = mat[:, j].copy()
        for i, b in enumerate(basis):
            coeff = np.vdot(b, v)
            ttilde[i, j] = coeff
            v = v - coeff * b
        norm = float(np.linalg.norm(v))
        if norm <= 1e-10:
            raise RankError("state %d is dependent on its predecessors" % j)
        ttilde[j, j] = norm
        basis.append(v / norm)

    # Complete the orthonormal set over computational basis vectors so u0
    # is a full rotation of the party space.
    for idx in range(dim):
        if len(basis) == dim:
            break
        v = np.zeros(dim, dtype=complex)
        v[idx] = 1.0
        for b in basis:
            v = v - np.vdot(b, v) * b
        norm = float(np.linalg.norm(v))
        if norm > 1e-10:
            basis.append(v / norm)
    u0 = np.array(basis).conj()
    return TriangularForm(u0, ttilde)
