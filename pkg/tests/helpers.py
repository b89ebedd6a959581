"""Brute-force reference implementations the test suite checks the package
against.

These deliberately re-derive results with the dumbest possible code:
explicit double loops over sample points, scalar Python arithmetic, and a
sequential block walk for the tent schedule. They share only the norm
primitive with the package (so scalar values are comparable bit for bit) —
the scan structure, the inequalities, and the recurrences are transcribed
independently from their displayed forms.
"""

from __future__ import annotations

import math

import numpy as np

from fixedlab.vecspace import NormKind, dist

# ---------------------------------------------------------------------------
# condition oracles: double loop, x-major, first violation wins
# ---------------------------------------------------------------------------


def oracle_nonexpansive(fn, points, eps, kind=NormKind.L2):
    """(passed, witness) where witness = (x, y, lhs, rhs) or None."""
    images = [fn(p) for p in points]
    for i, x in enumerate(points):
        for j, y in enumerate(points):
            lhs = dist(images[i], images[j], kind)
            rhs = dist(x, y, kind)
            if lhs > rhs + eps:
                return False, (tuple(x), tuple(y), lhs, rhs)
    return True, None


def oracle_condition_c_lambda(fn, points, lam, eps, kind=NormKind.L2):
    images = [fn(p) for p in points]
    for i, x in enumerate(points):
        d_x_tx = dist(x, images[i], kind)
        for j, y in enumerate(points):
            d_xy = dist(x, y, kind)
            if not (lam * d_x_tx <= d_xy):
                continue
            lhs = dist(images[i], images[j], kind)
            if lhs > d_xy + eps:
                return False, (tuple(x), tuple(y), lhs, d_xy)
    return True, None


def oracle_condition_b(fn, points, gamma, mu, eps, kind=NormKind.L2):
    """Two-parameter condition, transcribed premise and conclusion."""
    images = [fn(p) for p in points]
    for i, x in enumerate(points):
        d_x_tx = dist(x, images[i], kind)
        for j, y in enumerate(points):
            d_xy = dist(x, y, kind)
            d_y_ty = dist(y, images[j], kind)
            if not (gamma * d_x_tx <= d_xy + mu * d_y_ty):
                continue
            lhs = dist(images[i], images[j], kind)
            d_x_ty = dist(x, images[j], kind)
            d_y_tx = dist(y, images[i], kind)
            rhs = (1.0 - gamma) * d_xy + mu * (d_x_ty + d_y_tx)
            if lhs > rhs + eps:
                return False, (tuple(x), tuple(y), lhs, rhs)
    return True, None


def oracle_sweep(fn, points, pairs, eps, kind=NormKind.L2):
    """Status rows for (gamma, mu) pairs: 'skipped' | 'pass' | 'fail'."""
    rows = []
    for gamma, mu in pairs:
        if 2.0 * mu > gamma:
            rows.append((gamma, mu, "skipped", None))
            continue
        passed, witness = oracle_condition_b(fn, points, gamma, mu, eps, kind)
        rows.append((gamma, mu, "pass" if passed else "fail", witness))
    return rows


def oracle_quasi_nonexpansive(fn, points, fixed_points, eps, kind=NormKind.L2):
    for x in points:
        tx = fn(x)
        for z in fixed_points:
            lhs = dist(tx, z, kind)
            rhs = dist(x, z, kind)
            if lhs > rhs + eps:
                return False, (tuple(x), tuple(z), lhs, rhs)
    return True, None


# ---------------------------------------------------------------------------
# schedule oracle: sequential block walk emitting the whole prefix
# ---------------------------------------------------------------------------


def reference_tent(peak, first_block_length, growth, count):
    """First `count` values of the tent sequence, emitted block by block."""
    values = []
    j = 0
    while len(values) < count:
        length = math.ceil(first_block_length * growth ** j)
        half = math.ceil(length / 2)
        for t in range(length):
            values.append(peak * min(t, length - t) / half)
            if len(values) == count:
                return values
        j += 1
    return values


def reference_decay(scale, rate, count):
    return [min(0.5, scale / (n + 1) ** rate) for n in range(count)]


# ---------------------------------------------------------------------------
# iteration oracle: scalar recurrence, coordinate by coordinate
# ---------------------------------------------------------------------------


def reference_averaged_run(fns, weights_of, lam, x0, max_iters, residual_tol,
                           kind=NormKind.L2):
    """Replay of the averaged scheme with plain Python arithmetic.

    weights_of(n) returns the blend weights for step n. Returns the list of
    iterates (tuples) and the stop step. The recurrence is transcribed, not
    imported: w = sum_k c_k*T_k(x), then x <- lam*w + (1-lam)*x.
    """
    x = [float(c) for c in x0]
    iterates = [tuple(x)]
    n = 0
    while True:
        images = [fn(np.array(x, dtype=float)) for fn in fns]
        weights = weights_of(n)
        w = [0.0] * len(x)
        for c, img in zip(weights, images):
            for k in range(len(x)):
                w[k] += c * float(img[k])
        residual = dist(np.array(w), np.array(x), kind)
        if residual <= residual_tol or n >= max_iters:
            return iterates, n, residual
        x = [lam * w[k] + (1.0 - lam) * x[k] for k in range(len(x))]
        iterates.append(tuple(x))
        n += 1


def grid_points_1d(lo, hi, resolution):
    """The package's 1-d grid convention, rebuilt with np.linspace."""
    return [np.array([v]) for v in np.linspace(lo, hi, resolution)]
