# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors ``_pykernels`` function for function."""
import numpy as np

from libc.math cimport cos, sin

cdef extern from "_star_step.h":
    void star_step(Py_ssize_t n, double dt, const double *c, double *er, double *ei,
                   const double *hr, const double *hi, double *xr, double *xi,
                   double *sr, double *si, double *accr, double *acci,
                   double *a_re, double *a_im) nogil

# exact phase refresh interval (steps) for the recurrence-updated exponentials
DEF REFRESH = 256


def star_rk4(double[::1] coupling, double[::1] detuning, double complex a0,
             double dt, long n_steps, long sample_every):
    """Fixed-step RK4 for one emitter coupled to a star of modes.

    Interaction picture: da/dt = -i sum_k c_k e^{i D_k t} alpha_k,
    dalpha_k/dt = -i c_k e^{-i D_k t} a, with D_k = omega_m - nu_k.
    Returns (a_samples, alpha_samples) taken every ``sample_every`` steps,
    including t = 0.
    """
    cdef Py_ssize_t n = coupling.shape[0]
    cdef long n_samp = n_steps // sample_every + 1
    a_out_np = np.empty(n_samp, dtype=np.complex128)
    al_out_np = np.empty((n_samp, n), dtype=np.complex128)
    cdef double complex[::1] a_out = a_out_np
    cdef double complex[:, ::1] al_out = al_out_np

    # phases e^{i D t} at the current stage, and the half-step multiplier
    cdef double[::1] er = np.empty(n), ei = np.empty(n)
    cdef double[::1] hr = np.empty(n), hi = np.empty(n)
    # state, stage state and weighted slope sum, split into real / imaginary parts
    cdef double[::1] xr = np.zeros(n), xi = np.zeros(n)
    cdef double[::1] sr = np.empty(n), si = np.empty(n)
    cdef double[::1] accr = np.empty(n), acci = np.empty(n)
    cdef Py_ssize_t k
    cdef long step, samp = 0
    cdef double t, h2 = 0.5 * dt
    cdef double ar = a0.real, ai = a0.imag
    # raw pointers let the C compiler keep the loops free of view bookkeeping
    cdef double *pc = &coupling[0]
    cdef double *per = &er[0]
    cdef double *pei = &ei[0]
    cdef double *phr = &hr[0]
    cdef double *phi = &hi[0]
    cdef double *pxr = &xr[0]
    cdef double *pxi = &xi[0]
    cdef double *psr = &sr[0]
    cdef double *psi = &si[0]
    cdef double *par = &accr[0]
    cdef double *pai = &acci[0]

    for k in range(n):
        hr[k] = cos(detuning[k] * h2)
        hi[k] = sin(detuning[k] * h2)
        er[k] = 1.0
        ei[k] = 0.0

    a_out[0] = a0
    for k in range(n):
        al_out[0, k] = 0.0

    for step in range(n_steps):
        t = step * dt
        if step % REFRESH == 0:
            for k in range(n):
                er[k] = cos(detuning[k] * t)
                ei[k] = sin(detuning[k] * t)
        star_step(n, dt, pc, per, pei, phr, phi, pxr, pxi, psr, psi, par, pai, &ar, &ai)
        if (step + 1) % sample_every == 0:
            samp += 1
            a_out[samp] = ar + 1j * ai
            for k in range(n):
                al_out[samp, k] = xr[k] + 1j * xi[k]
    return a_out_np, al_out_np


def telegraph_on_grid(double[:, ::1] switch_times, double[::1] t_grid):
    """Signed dwell integral and switch count of unit telegraph paths.

    ``switch_times`` rows are increasing cumulative switch times starting in
    state +1; returns I(t) = int_0^t x(s) ds and N(t) on ``t_grid`` (sorted).
    """
    cdef Py_ssize_t m = switch_times.shape[0], kmax = switch_times.shape[1]
    cdef Py_ssize_t ng = t_grid.shape[0]
    integral_np = np.empty((m, ng), dtype=np.float64)
    count_np = np.empty((m, ng), dtype=np.int64)
    cdef double[:, ::1] integral = integral_np
    cdef long long[:, ::1] count = count_np
    cdef Py_ssize_t i, j, k
    cdef double acc, last, sign, tg
    for i in range(m):
        k = 0
        acc = 0.0
        last = 0.0
        sign = 1.0
        for j in range(ng):
            tg = t_grid[j]
            while k < kmax and switch_times[i, k] <= tg:
                acc += sign * (switch_times[i, k] - last)
                last = switch_times[i, k]
                sign = -sign
                k += 1
            integral[i, j] = acc + sign * (tg - last)
            count[i, j] = k
    return integral_np, count_np
