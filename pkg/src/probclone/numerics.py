"""Dense complex linear algebra used by every other module.

Matrices and vectors are plain ``numpy.ndarray`` objects with dtype
``complex128``; a matrix is two-dimensional and row-major, a vector is
one-dimensional.  All functions are pure: inputs are never mutated.

The Hermitian eigensolver is a cyclic Jacobi iteration with a fixed sweep
order, so for a given input the returned factors are reproducible
bit-for-bit.  Eigenvectors are canonicalized so the largest-magnitude entry
of each column is real and positive; callers must not rely on any finer
phase convention.
"""

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    NotPSDError,
    SingularError,
    SymmetryError,
)

DEFAULT_TOL = 1e-10

_COND_CAP = 1e12


def _as_matrix(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise DimensionError("expected a matrix, got ndim=%d" % a.ndim)
    return a


def matmul(a, b):
    """Complex matrix product a @ b with an explicit shape check."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            "cannot multiply %dx%d by %dx%d"
            % (a.shape[0], a.shape[1], b.shape[0], b.shape[1])
        )
    return a @ b


def adjoint(a):
    """Conjugate transpose."""
    return _as_matrix(a).conj().T


def unitary_residual(a):
    """Return max |a† a - I|, zero exactly when a is unitary."""
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError("unitary_residual needs a square matrix")
    n = a.shape[0]
    return float(np.abs(a.conj().T @ a - np.eye(n)).max())


def hermitian_eigen(a, tol=DEFAULT_TOL, max_sweeps=60):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, q)`` with ``w`` real ascending and ``q`` unitary such that
    ``a = q @ diag(w) @ q†``.  Each eigenvector column is scaled so its
    largest-magnitude entry is real positive.

    Raises SymmetryError when ``a`` is not Hermitian within ``tol`` and
    ConvergenceError when the off-diagonal mass does not fall below ``tol``
    within ``max_sweeps`` sweeps.
    """
    a = _as_matrix(a)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise DimensionError("eigendecomposition needs a square matrix")
    if float(np.abs(a - a.conj().T).max()) > tol:
        raise SymmetryError(
            "matrix is not Hermitian within %g (residual %g)"
            % (tol, float(np.abs(a - a.conj().T).max()))
        )

    m = a.astype(complex).copy()
    q = np.eye(n, dtype=complex)
    converged = False
    for _ in range(max_sweeps):
        off = 0.0
        if n > 1:
            off = float(np.abs(m - np.diag(np.diag(m))).max())
        if off <= tol:
            converged = True
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                g = m[p, r]
                mag = abs(g)
                if mag == 0.0:
                    continue
                phase = g / mag
                alpha = m[p, p].real
                beta = m[r, r].real
                tau = (alpha - beta) / (2.0 * mag)
                sign = 1.0 if tau >= 0.0 else -1.0
                t = sign / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # u differs from the identity only at (p, r):
                # u[p,p] = c, u[p,r] = -s*phase, u[r,p] = s*conj(phase), u[r,r] = c
                col_p = m[:, p].copy()
                col_r = m[:, r].copy()
                m[:, p] = c * col_p + s * np.conj(phase) * col_r
                m[:, r] = -s * phase * col_p + c * col_r
                row_p = m[p, :].copy()
                row_r = m[r, :].copy()
                m[p, :] = c * row_p + s * phase * row_r
                m[r, :] = -s * np.conj(phase) * row_p + c * row_r
                qp = q[:, p].copy()
                qr = q[:, r].copy()
                q[:, p] = c * qp + s * np.conj(phase) * qr
                q[:, r] = -s * phase * qp + c * qr
    if not converged and n > 1:
        converged = float(np.abs(m - np.diag(np.diag(m))).max()) <= tol
    if not converged and n > 1:
        raise ConvergenceError(
            "Jacobi sweep cap %d reached without convergence" % max_sweeps
        )

    w = np.real(np.diag(m)).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    q = q[:, order]
    for j in range(n):
        col = q[:, j]
        mags = np.abs(col)
        # first entry within rounding noise of the maximum, so near-ties
        # (like the 1/sqrt(2) pair in a quarter-turn column) resolve to a
        # stable pivot independent of last-bit differences
        i0 = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
        pivot = col[i0]
        if abs(pivot) > 0.0:
            q[:, j] = col * (np.conj(pivot) / abs(pivot))
    return w, q


def cholesky_psd(a, tol=DEFAULT_TOL):
    """Lower-triangular L with L L† = a for Hermitian PSD ``a``.

    Pivots of magnitude at most ``tol`` are treated as exact zeros, so
    rank-deficient inputs are accepted (their null directions get zero
    columns).  A matrix with an eigenvalue below ``-tol`` raises
    NotPSDError carrying that eigenvalue.
    """
    a = _as_matrix(a)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise DimensionError("cholesky_psd needs a square matrix")
    w, _ = hermitian_eigen((a + a.conj().T) / 2.0, tol=tol)
    if n and w[0] < -tol:
        raise NotPSDError(w[0])

    low = np.zeros((n, n), dtype=complex)
    for j in range(n):
        d = a[j, j].real - float(np.sum(np.abs(low[j, :j]) ** 2))
        if d <= tol:
            continue
        low[j, j] = np.sqrt(d)
        for i in range(j + 1, n):
            acc = a[i, j] - np.dot(low[i, :j], np.conj(low[j, :j]))
            low[i, j] = acc / low[j, j]
    return low


def inverse(a):
    """Matrix inverse with a condition-number cap.

    Raises SingularError for singular matrices and for condition numbers
    above 1e12, where the result would have fewer than four trustworthy
    digits.
    """
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError("inverse needs a square matrix")
    try:
        cond = np.linalg.cond(a)
    except np.linalg.LinAlgError as exc:
        raise SingularError(str(exc)) from exc
    if not np.isfinite(cond) or cond > _COND_CAP:
        raise SingularError("condition number %.3g exceeds cap %.0e" % (cond, _COND_CAP))
    try:
        return np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise SingularError(str(exc)) from exc


def expi_hermitian(h, scale=1.0, tol=DEFAULT_TOL):
    """exp(-1j * scale * h) for Hermitian ``h``, via the eigenbasis."""
    h = _as_matrix(h)
    w, q = hermitian_eigen(h, tol=tol)
    phases = np.exp(-1j * scale * w)
    return (q * phases) @ q.conj().T
