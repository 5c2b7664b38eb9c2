"""Delayed-oscillator simulation kernels for the 4-node star grid.

Dynamics per node i (node 0 supplies, nodes 1..3 consume, star edges
0-1, 0-2, 0-3):

    dtheta_i/dt = omega_i
    domega_i/dt = p_i - alpha*omega_i - g_i*omega_i(t - tau_i)
                  + K * sum_{j adj i} sin(theta_j - theta_i)

integrated with fixed-step classic RK4 from the phase-locked equilibrium
(theta*_k = arcsin(p_k/K) for consumers, theta*_0 = 0) with all
frequencies offset by the perturbation. The delayed frequency is read
from a per-step history buffer with linear interpolation; history before
t=0 is the constant perturbation. The stability index is the slope of a
least-squares line through log(max_i |omega_i|) over the trailing fit
window. If |omega| crosses the overflow guard the run stops early and
the realized average growth rate log(guard/omega0)/t is reported with a
blowup flag.

Two interchangeable implementations: a numba per-row loop parallelized
over rows, and a pure-numpy fallback vectorized across rows in chunks.
The supplier's three coupling terms are summed in sorted order in both,
which makes the index exactly invariant under consumer permutations.
"""
import numpy as np

from .._accel import NUMBA_ENABLED, njit_maybe

if NUMBA_ENABLED:
    from numba import prange
else:
    prange = range

LOG_FLOOR = 1e-300
NUMPY_CHUNK_ROWS = 256


@njit_maybe(cache=True)
def _sorted_sum3(a, b, c):
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
    if a > b:
        a, b = b, a
    return (a + b) + c


@njit_maybe(cache=True)
def _simulate_one(tau, p, g, alpha, coupling, h, nsteps, omega0,
                  fit_start, guard):
    theta = np.empty(4)
    theta[0] = 0.0
    for j in range(1, 4):
        theta[j] = np.arcsin(p[j] / coupling)
    omega = np.full(4, omega0)

    hist = np.empty((nsteps + 1, 4))
    hist[0, :] = omega0

    # per-(stage, node) delay lookup: floor offset and interpolation weight
    d0 = np.empty((3, 4), dtype=np.int64)
    w0 = np.empty((3, 4))
    for s in range(3):
        c = 0.0 if s == 0 else (0.5 if s == 1 else 1.0)
        for j in range(4):
            x = c - tau[j] / h
            f = np.floor(x)
            d0[s, j] = np.int64(f)
            w0[s, j] = x - f

    sx = 0.0
    sxx = 0.0
    sy = 0.0
    sxy = 0.0
    nfit = 0.0

    kth = np.empty(4)
    kom = np.empty(4)
    th_s = np.empty(4)
    om_s = np.empty(4)
    acc_th = np.empty(4)
    acc_om = np.empty(4)
    omd = np.empty(4)

    for k in range(nsteps):
        for j in range(4):
            th_s[j] = theta[j]
            om_s[j] = omega[j]
            acc_th[j] = 0.0
            acc_om[j] = 0.0
        for stage in range(4):
            sidx = 0 if stage == 0 else (1 if stage < 3 else 2)
            for j in range(4):
                m = k + d0[sidx, j]
                w = w0[sidx, j]
                v0 = hist[m, j] if m > 0 else omega0
                v1 = hist[m + 1, j] if m + 1 > 0 else omega0
                omd[j] = v0 * (1.0 - w) + v1 * w
            s1 = np.sin(th_s[1] - th_s[0])
            s2 = np.sin(th_s[2] - th_s[0])
            s3 = np.sin(th_s[3] - th_s[0])
            kth[0] = om_s[0]
            kom[0] = (p[0] - alpha * om_s[0] - g[0] * omd[0]
                      + coupling * _sorted_sum3(s1, s2, s3))
            kth[1] = om_s[1]
            kom[1] = p[1] - alpha * om_s[1] - g[1] * omd[1] - coupling * s1
            kth[2] = om_s[2]
            kom[2] = p[2] - alpha * om_s[2] - g[2] * omd[2] - coupling * s2
            kth[3] = om_s[3]
            kom[3] = p[3] - alpha * om_s[3] - g[3] * omd[3] - coupling * s3

            wgt = 1.0 if (stage == 0 or stage == 3) else 2.0
            for j in range(4):
                acc_th[j] += wgt * kth[j]
                acc_om[j] += wgt * kom[j]
            if stage < 3:
                step = 0.5 * h if stage < 2 else h
                for j in range(4):
                    th_s[j] = theta[j] + step * kth[j]
                    om_s[j] = omega[j] + step * kom[j]

        emax = 0.0
        for j in range(4):
            theta[j] += (h / 6.0) * acc_th[j]
            omega[j] += (h / 6.0) * acc_om[j]
            hist[k + 1, j] = omega[j]
            a = abs(omega[j])
            if a > emax:
                emax = a
        t = (k + 1) * h
        if emax > guard or not np.isfinite(emax):
            return np.log(guard / omega0) / t, True
        if t >= fit_start:
            y = np.log(emax) if emax > LOG_FLOOR else np.log(LOG_FLOOR)
            sx += t
            sxx += t * t
            sy += y
            sxy += t * y
            nfit += 1.0

    return (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx), False


@njit_maybe(cache=True, parallel=True)
def _simulate_rows_numba(taus, ps, gs, alpha, coupling, h, nsteps, omega0,
                         fit_start, guard):
    n = taus.shape[0]
    index = np.empty(n)
    blowup = np.zeros(n, dtype=np.bool_)
    for i in prange(n):
        r, b = _simulate_one(taus[i], ps[i], gs[i], alpha, coupling, h,
                             nsteps, omega0, fit_start, guard)
        index[i] = r
        blowup[i] = b
    return index, blowup


def _simulate_chunk_numpy(taus, ps, gs, alpha, coupling, h, nsteps, omega0,
                          fit_start, guard):
    B = taus.shape[0]
    theta = np.zeros((B, 4))
    theta[:, 1:] = np.arcsin(ps[:, 1:] / coupling)
    omega = np.full((B, 4), omega0)

    hist = np.empty((nsteps + 1, B, 4))
    hist[0] = omega0
    br = np.arange(B)[:, None]
    jr = np.arange(4)[None, :]

    offsets = np.array([0.0, 0.5, 1.0])
    x = offsets[:, None, None] - taus[None, :, :] / h
    d0 = np.floor(x).astype(np.int64)
    w0 = x - np.floor(x)

    sx = 0.0
    sxx = 0.0
    nfit = 0.0
    sy = np.zeros(B)
    sxy = np.zeros(B)
    blow_step = np.full(B, -1, dtype=np.int64)

    stage_weights = (1.0, 2.0, 2.0, 1.0)
    with np.errstate(all="ignore"):
        for k in range(nsteps):
            th_s = theta
            om_s = omega
            acc_th = np.zeros((B, 4))
            acc_om = np.zeros((B, 4))
            for stage in range(4):
                sidx = 0 if stage == 0 else (1 if stage < 3 else 2)
                m = k + d0[sidx]
                v0 = hist[np.maximum(m, 0), br, jr]
                v1 = hist[np.maximum(m + 1, 0), br, jr]
                omd = v0 * (1.0 - w0[sidx]) + v1 * w0[sidx]

                sins = np.sin(th_s[:, 1:] - th_s[:, 0:1])
                ss = np.sort(sins, axis=1)
                coup0 = coupling * ((ss[:, 0] + ss[:, 1]) + ss[:, 2])
                kth = om_s
                kom = ps - alpha * om_s - gs * omd
                kom = kom + np.concatenate(
                    [coup0[:, None], -coupling * sins], axis=1)

                wgt = stage_weights[stage]
                acc_th += wgt * kth
                acc_om += wgt * kom
                if stage < 3:
                    step = 0.5 * h if stage < 2 else h
                    th_s = theta + step * kth
                    om_s = omega + step * kom

            theta = theta + (h / 6.0) * acc_th
            omega = omega + (h / 6.0) * acc_om
            hist[k + 1] = omega
            emax = np.abs(omega).max(axis=1)
            t = (k + 1) * h
            newly = ((emax > guard) | ~np.isfinite(emax)) & (blow_step < 0)
            if newly.any():
                blow_step[newly] = k + 1
            if t >= fit_start:
                y = np.log(np.maximum(emax, LOG_FLOOR))
                sx += t
                sxx += t * t
                sy += y
                sxy += t * y
                nfit += 1.0

    index = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx)
    blown = blow_step > 0
    if blown.any():
        index[blown] = np.log(guard / omega0) / (blow_step[blown] * h)
    return index, blown


def simulate_rows_numpy(taus, ps, gs, alpha, coupling, h, nsteps, omega0,
                        fit_start, guard, chunk_rows=NUMPY_CHUNK_ROWS):
    n = taus.shape[0]
    index = np.empty(n)
    blowup = np.zeros(n, dtype=bool)
    for lo in range(0, n, chunk_rows):
        hi = min(lo + chunk_rows, n)
        index[lo:hi], blowup[lo:hi] = _simulate_chunk_numpy(
            taus[lo:hi], ps[lo:hi], gs[lo:hi], alpha, coupling, h, nsteps,
            omega0, fit_start, guard)
    return index, blowup


def simulate_rows(taus, ps, gs, alpha, coupling, h, nsteps, omega0,
                  fit_start, guard, use_numba=None):
    """Stability index + blowup flag per parameter row."""
    taus = np.ascontiguousarray(taus, dtype=np.float64)
    ps = np.ascontiguousarray(ps, dtype=np.float64)
    gs = np.ascontiguousarray(gs, dtype=np.float64)
    if use_numba is None:
        use_numba = NUMBA_ENABLED
    if use_numba and NUMBA_ENABLED:
        return _simulate_rows_numba(taus, ps, gs, alpha, coupling, h,
                                    int(nsteps), omega0, fit_start, guard)
    return simulate_rows_numpy(taus, ps, gs, alpha, coupling, h,
                               int(nsteps), omega0, fit_start, guard)
