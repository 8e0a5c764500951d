"""Numeric kernels.

Each function here is compiled by numba unless the numpy fallback is
selected (see ``_backend``).  They take and return plain float64 arrays and
signal failures through status codes, never exceptions; the public wrappers
in the other modules turn those codes into typed errors.
"""

import numpy as np

from ._backend import kernel

LU_OK = 0
LU_SINGULAR = 1


@kernel
def full_gram(a):
    n = a.shape[0]
    g = np.empty((n, n))
    for j in range(n):
        s = 0.0
        for k in range(n):
            s += a[k, j] * a[k, j]
        g[j, j] = (n - 1) + s
        for i in range(j):
            v = 1.0 - a[i, j] - a[j, i]
            g[i, j] = v
            g[j, i] = v
    return g


@kernel
def reduced_gram(a):
    n = a.shape[0]
    g = np.empty((n, n))
    for j in range(n):
        s = 0.0
        for k in range(n):
            if k != j:
                s += a[k, j] * a[k, j]
        g[j, j] = (n - 1) + s
        for i in range(j):
            v = -a[i, j] - a[j, i]
            g[i, j] = v
            g[j, i] = v
    return g


@kernel
def wls_objective(a, w):
    n = a.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            d = w[i] - a[i, j] * w[j]
            total += d * d
    return total


@kernel
def lu_factor(m, rel_tol):
    """Partial-pivoting LU of ``m``.

    Returns ``(lu, perm, status, step, min_pivot)`` where ``min_pivot`` is the
    smallest pivot magnitude divided by the largest input magnitude.
    """
    n = m.shape[0]
    lu = m.copy()
    perm = np.arange(n)
    scale = np.max(np.abs(m)) if n > 0 else 0.0
    min_pivot = np.inf
    if scale == 0.0 or not np.isfinite(scale):
        return lu, perm, LU_SINGULAR, 0, 0.0
    threshold = rel_tol * scale
    for k in range(n):
        p = k + np.argmax(np.abs(lu[k:, k]))
        if p != k:
            tmp = lu[k, :].copy()
            lu[k, :] = lu[p, :]
            lu[p, :] = tmp
            t = perm[k]
            perm[k] = perm[p]
            perm[p] = t
        piv = lu[k, k]
        ratio = abs(piv) / scale
        if ratio < min_pivot:
            min_pivot = ratio
        if abs(piv) < threshold:
            return lu, perm, LU_SINGULAR, k, min_pivot
        if k + 1 < n:
            lu[k + 1:, k] /= piv
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, LU_OK, n, min_pivot


@kernel
def lu_solve(lu, perm, b):
    """Solve with a factorization from ``lu_factor``; ``b`` is (n, k)."""
    n = lu.shape[0]
    x = np.empty_like(b)
    for i in range(n):
        x[i, :] = b[perm[i], :]
    for i in range(n):
        for j in range(i):
            x[i, :] -= lu[i, j] * x[j, :]
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            x[i, :] -= lu[i, j] * x[j, :]
        x[i, :] /= lu[i, i]
    return x


@kernel
def power_iteration(m, tol, max_iter):
    """Dominant eigenpair of a positive matrix, starting from the uniform vector.

    Returns ``(eigenvalue, eigenvector summing to 1, iterations, converged)``.
    """
    n = m.shape[0]
    x = np.full(n, 1.0 / n)
    y = np.empty(n)
    lam = 0.0
    for it in range(1, max_iter + 1):
        for i in range(n):
            s = 0.0
            for j in range(n):
                s += m[i, j] * x[j]
            y[i] = s
        new_lam = np.sum(y)  # x sums to 1
        x = y / new_lam
        if abs(new_lam - lam) < tol:
            return new_lam, x, it, True
        lam = new_lam
    return lam, x, max_iter, False


@kernel
def simplex_point(x, floor):
    """Map free coordinates ``x`` (length n-1) onto the open simplex."""
    d = x.shape[0]
    w = np.empty(d + 1)
    rest = 1.0
    for i in range(d):
        w[i] = x[i]
        rest -= x[i]
    w[d] = rest
    for i in range(d + 1):
        if w[i] < floor:
            w[i] = floor
    return w / np.sum(w)


@kernel
def _nm_eval(a, x, floor):
    return wls_objective(a, simplex_point(x, floor))


@kernel
def nelder_mead_run(a, x0, steps, max_evals, ftol, xtol, floor):
    """One Nelder-Mead descent with adaptive coefficients.

    Returns ``(best x, best f, evaluations used, converged)``.
    """
    d = x0.shape[0]
    if d >= 2:
        alpha, beta, gamma, delta = 1.0, 1.0 + 2.0 / d, 0.75 - 0.5 / d, 1.0 - 1.0 / d
    else:
        alpha, beta, gamma, delta = 1.0, 2.0, 0.5, 0.5
    sim = np.empty((d + 1, d))
    fs = np.empty(d + 1)
    sim[0, :] = x0
    for i in range(d):
        sim[i + 1, :] = x0
        sim[i + 1, i] += steps[i]
    for i in range(d + 1):
        fs[i] = _nm_eval(a, sim[i], floor)
    evals = d + 1
    converged = False
    while evals < max_evals:
        order = np.argsort(fs, kind="mergesort")
        sim = sim[order]
        fs = fs[order]
        xspread = np.max(np.abs(sim[1:] - sim[0])) if d > 0 else 0.0
        fspread = fs[d] - fs[0]
        if xspread <= xtol and (fspread <= ftol * abs(fs[0]) or fspread <= 1e-20):
            converged = True
            break
        centroid = np.sum(sim[:d], axis=0) / d
        xr = centroid + alpha * (centroid - sim[d])
        fr = _nm_eval(a, xr, floor)
        evals += 1
        shrink = False
        if fr < fs[0]:
            xe = centroid + beta * (xr - centroid)
            fe = _nm_eval(a, xe, floor)
            evals += 1
            if fe < fr:
                sim[d, :] = xe
                fs[d] = fe
            else:
                sim[d, :] = xr
                fs[d] = fr
        elif fr < fs[d - 1]:
            sim[d, :] = xr
            fs[d] = fr
        elif fr < fs[d]:
            xc = centroid + gamma * (xr - centroid)
            fc = _nm_eval(a, xc, floor)
            evals += 1
            if fc <= fr:
                sim[d, :] = xc
                fs[d] = fc
            else:
                shrink = True
        else:
            xc = centroid + gamma * (sim[d] - centroid)
            fc = _nm_eval(a, xc, floor)
            evals += 1
            if fc < fs[d]:
                sim[d, :] = xc
                fs[d] = fc
            else:
                shrink = True
        if shrink:
            for i in range(1, d + 1):
                sim[i, :] = sim[0] + delta * (sim[i] - sim[0])
                fs[i] = _nm_eval(a, sim[i], floor)
            evals += d
    best = np.argmin(fs)
    return sim[best].copy(), fs[best], evals, converged


@kernel
def nelder_mead_restarts(a, x0, step_scales, base_step, max_evals, ftol, xtol, floor):
    """Restarted Nelder-Mead: re-seed a fresh simplex at the incumbent until a
    restart no longer improves the objective by more than ``ftol`` (relative).

    ``step_scales`` is an (R, n-1) array of per-restart step multipliers; it
    carries all the randomness so both backends see the same inputs.
    """
    d = x0.shape[0]
    x_best = x0.copy()
    f_best = _nm_eval(a, x_best, floor)
    evals = 1
    converged = False
    n_restarts = step_scales.shape[0]
    for r in range(n_restarts):
        budget = max_evals - evals
        if budget <= d + 1:
            converged = False
            break
        steps = base_step * step_scales[r]
        x, f, used, conv = nelder_mead_run(a, x_best, steps, budget, ftol, xtol, floor)
        evals += used
        improved = f < f_best - (ftol * abs(f_best) + 1e-20)
        if f < f_best:
            x_best = x
            f_best = f
        if not conv:
            converged = False
            break
        if r > 0 and not improved:
            converged = True
            break
    return simplex_point(x_best, floor), f_best, evals, converged
