"""Reference float64 kernels in plain Python.

Mirror of ``_ckernels.pyx``; selected when the compiled module is missing or
``PADIC_HARDY_PURE`` is set.
"""

from __future__ import annotations

import math

import numpy as np


def hardy_recurrence(c, r: float, head: float):
    """``out_m = r out_{m-1} + (1 - r) c_m`` with ``out_{-1} = head``."""
    out = np.empty(len(c))
    acc = head
    one_minus = 1.0 - r
    for i, ck in enumerate(c):
        acc = r * acc + one_minus * ck
        out[i] = acc
    return out


def suffix_sum(c, tail: float, strict: bool = True):
    """``out_m = tail + sum_{k > m} c_k`` (``k >= m`` when not strict)."""
    n = len(c)
    out = np.empty(n)
    acc = tail
    for i in range(n - 1, -1, -1):
        if strict:
            out[i] = acc
            acc += c[i]
        else:
            acc += c[i]
            out[i] = acc
    return out


def weighted_power_sum(c, q: float, ratio: float, first: float) -> float:
    """``sum_i |c_i|^q * first * ratio^i``."""
    total = 0.0
    wk = first
    for ck in c:
        if ck != 0.0:
            total += abs(ck) ** q * wk
        wk *= ratio
    return total


def cmo_window(c, sizes, head_mass: float, head_value: float, q: float):
    """``|B_g|``-normalized q-oscillations for each prefix of the window.

    ``sizes[i]`` is the shell measure of entry ``i``; everything below the
    window is one block of measure ``head_mass`` carrying ``head_value``.
    """
    n = len(c)
    out = np.empty(n)
    mass = head_mass
    integral = head_mass * head_value
    for g in range(n):
        mass += sizes[g]
        integral += c[g] * sizes[g]
        mu = integral / mass
        acc = head_mass * abs(head_value - mu) ** q if head_mass > 0.0 else 0.0
        for k in range(g + 1):
            acc += abs(c[k] - mu) ** q * sizes[k]
        out[g] = acc / mass
    return out


def toeplitz_apply(x, lo_w, lo_rho, hi_w, hi_rho, diag, transpose: bool = False):
    """Apply the shell convolution with kernel ``lo_w lo_rho^j`` (j >= 0),
    ``hi_w hi_rho^j`` (j >= 1, above the diagonal) and ``diag``."""
    n = len(x)
    y = np.empty(n)
    if not transpose:
        acc = 0.0
        for i in range(n):
            acc = lo_rho * acc + x[i]
            y[i] = lo_w * acc + diag * x[i]
        acc = 0.0
        for i in range(n - 1, -1, -1):
            y[i] += hi_w * acc
            acc = hi_rho * (acc + x[i])
    else:
        acc = 0.0
        for i in range(n - 1, -1, -1):
            acc = lo_rho * acc + x[i]
            y[i] = lo_w * acc + diag * x[i]
        acc = 0.0
        for i in range(n):
            y[i] += hi_w * acc
            acc = hi_rho * (acc + x[i])
    return y


def power_iteration(x0, lo_w, lo_rho, hi_w, hi_rho, diag, iters: int, tol: float):
    """Largest singular value of the truncated convolution by power iteration.

    Returns ``(sigma, residual, steps)``; ``sigma = |Sv| / |v|`` is a valid lower
    bound for every iterate.
    """
    v = np.array(x0, dtype=float)
    v /= math.sqrt(float(np.dot(v, v)))
    sigma, residual, steps = 0.0, math.inf, 0
    for steps in range(1, iters + 1):
        sv = toeplitz_apply(v, lo_w, lo_rho, hi_w, hi_rho, diag)
        w = toeplitz_apply(sv, lo_w, lo_rho, hi_w, hi_rho, diag, transpose=True)
        lam = float(np.dot(sv, sv))
        sigma = math.sqrt(lam)
        residual = math.sqrt(float(np.dot(w - lam * v, w - lam * v))) / lam
        v = w / math.sqrt(float(np.dot(w, w)))
        if residual < tol:
            break
    return sigma, residual, steps
