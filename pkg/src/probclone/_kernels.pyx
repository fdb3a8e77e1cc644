# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled state-vector gate kernels.

Same contracts as _kernels_py: in-place updates of a contiguous
complex128 array, wire 0 most significant.
"""


def apply_single(double complex[::1] amps, int n, int wire,
                 double complex u00, double complex u01,
                 double complex u10, double complex u11):
    cdef Py_ssize_t shift = n - 1 - wire
    cdef Py_ssize_t bit = (<Py_ssize_t>1) << shift
    cdef Py_ssize_t low = bit - 1
    cdef Py_ssize_t half = ((<Py_ssize_t>1) << n) >> 1
    cdef Py_ssize_t base, i0, i1
    cdef double complex a0, a1
    for base in range(half):
        i0 = ((base >> shift) << (shift + 1)) | (base & low)
        i1 = i0 | bit
        a0 = amps[i0]
        a1 = amps[i1]
        amps[i0] = u00 * a0 + u01 * a1
        amps[i1] = u10 * a0 + u11 * a1


def apply_x(double complex[::1] amps, int n, int wire):
    cdef Py_ssize_t shift = n - 1 - wire
    cdef Py_ssize_t bit = (<Py_ssize_t>1) << shift
    cdef Py_ssize_t low = bit - 1
    cdef Py_ssize_t half = ((<Py_ssize_t>1) << n) >> 1
    cdef Py_ssize_t base, i0, i1
    cdef double complex a0
    for base in range(half):
        i0 = ((base >> shift) << (shift + 1)) | (base & low)
        i1 = i0 | bit
        a0 = amps[i0]
        amps[i0] = amps[i1]
        amps[i1] = a0


def apply_cnot(double complex[::1] amps, int n, int control, int target):
    cdef Py_ssize_t cbit = (<Py_ssize_t>1) << (n - 1 - control)
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << (n - 1 - target)
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t idx, j
    cdef double complex a0
    for idx in range(size):
        if (idx & cbit) != 0 and (idx & tbit) == 0:
            j = idx | tbit
            a0 = amps[idx]
            amps[idx] = amps[j]
            amps[j] = a0


def apply_controlled(double complex[::1] amps, int n, Py_ssize_t cmask, int target,
                     double complex u00, double complex u01,
                     double complex u10, double complex u11):
    cdef Py_ssize_t tbit = (<Py_ssize_t>1) << (n - 1 - target)
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t idx, j
    cdef double complex a0, a1
    for idx in range(size):
        if (idx & cmask) == cmask and (idx & tbit) == 0:
            j = idx | tbit
            a0 = amps[idx]
            a1 = amps[j]
            amps[idx] = u00 * a0 + u01 * a1
            amps[j] = u10 * a0 + u11 * a1
