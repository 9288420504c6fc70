"""Pure-numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np

REFRESH = 256


def star_rk4(coupling, detuning, a0, dt, n_steps, sample_every):
    coupling = np.ascontiguousarray(coupling, dtype=float)
    detuning = np.ascontiguousarray(detuning, dtype=float)
    n = coupling.size
    n_samp = n_steps // sample_every + 1
    a_out = np.empty(n_samp, dtype=complex)
    al_out = np.empty((n_samp, n), dtype=complex)
    half = np.exp(0.5j * detuning * dt)
    a = complex(a0)
    alpha = np.zeros(n, dtype=complex)
    a_out[0] = a
    al_out[0] = 0.0
    samp = 0
    phase = np.ones(n, dtype=complex)

    def rhs(ph, a_s, al_s):
        return -1j * np.dot(coupling * ph, al_s), (-1j * a_s) * (coupling * ph.conj())

    for step in range(n_steps):
        if step % REFRESH == 0:
            phase = np.exp(1j * detuning * (step * dt))
        ph_mid = phase * half
        ph_end = ph_mid * half
        ka1, kl1 = rhs(phase, a, alpha)
        ka2, kl2 = rhs(ph_mid, a + 0.5 * dt * ka1, alpha + 0.5 * dt * kl1)
        ka3, kl3 = rhs(ph_mid, a + 0.5 * dt * ka2, alpha + 0.5 * dt * kl2)
        ka4, kl4 = rhs(ph_end, a + dt * ka3, alpha + dt * kl3)
        a = a + dt / 6.0 * (ka1 + 2 * ka2 + 2 * ka3 + ka4)
        alpha = alpha + dt / 6.0 * (kl1 + 2 * kl2 + 2 * kl3 + kl4)
        phase = ph_end
        if (step + 1) % sample_every == 0:
            samp += 1
            a_out[samp] = a
            al_out[samp] = alpha
    return a_out, al_out


def telegraph_on_grid(switch_times, t_grid):
    switch_times = np.asarray(switch_times, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    m, kmax = switch_times.shape
    # row-wise searchsorted via offsets on a flattened array
    finite = switch_times[np.isfinite(switch_times)]
    span = max(t_grid[-1], finite.max(initial=0.0)) + 1.0
    # +inf padding never switches on the grid; clip it so the row offsets stay exact
    switch_times = np.minimum(switch_times, span - 0.5)
    offsets = span * np.arange(m)[:, None]
    flat = (switch_times + offsets).ravel()
    counts = np.searchsorted(flat, (t_grid[None, :] + offsets).ravel(), side="right")
    counts = counts.reshape(m, -1) - kmax * np.arange(m)[:, None]
    seg = np.diff(switch_times, axis=1, prepend=0.0)
    signs = np.where(np.arange(kmax) % 2 == 0, 1.0, -1.0)
    acc = np.concatenate([np.zeros((m, 1)), np.cumsum(seg * signs, axis=1)], axis=1)
    last = np.concatenate([np.zeros((m, 1)), switch_times], axis=1)
    rows = np.arange(m)[:, None]
    sign_now = np.where(counts % 2 == 0, 1.0, -1.0)
    integral = acc[rows, counts] + sign_now * (t_grid[None, :] - last[rows, counts])
    return integral, counts.astype(np.int64)
