"""Finite-difference differential geometry on immersed charts.

Central-difference first/second derivatives of a chart map feed the
unnormalized trace of the second fundamental form, in flat ambient space
or in a curved ambient metric with Christoffel symbols themselves obtained
by finite differences.  These are the independent curvature oracles the
closed-form routes are checked against, so nothing here may share code
with the analytic formulas.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ChartFailure

ChartMap = Callable[[np.ndarray], np.ndarray]


def chart_derivatives(chart: ChartMap, xi0: np.ndarray, step: float):
    """First and second central differences of chart at xi0.

    Returns (first, second) with first[a] = dF/dxi_a and
    second[a][b] = d2F/dxi_a dxi_b (symmetric).
    """
    xi0 = np.asarray(xi0, dtype=float)
    dim = len(xi0)
    f0 = np.asarray(chart(xi0), dtype=float)

    def at(offsets):
        xi = xi0.copy()
        for a, s in offsets:
            xi[a] += s * step
        return np.asarray(chart(xi), dtype=float)

    plus = [at([(a, +1)]) for a in range(dim)]
    minus = [at([(a, -1)]) for a in range(dim)]
    first = [(plus[a] - minus[a]) / (2.0 * step) for a in range(dim)]
    second = [[None] * dim for _ in range(dim)]
    for a in range(dim):
        second[a][a] = (plus[a] - 2.0 * f0 + minus[a]) / (step * step)
    for a in range(dim):
        for b in range(a + 1, dim):
            mixed = (
                at([(a, +1), (b, +1)])
                - at([(a, +1), (b, -1)])
                - at([(a, -1), (b, +1)])
                + at([(a, -1), (b, -1)])
            ) / (4.0 * step * step)
            second[a][b] = mixed
            second[b][a] = mixed
    return np.array(first), np.array(second)


def mean_curvature_flat(chart: ChartMap, xi0: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Trace of the second fundamental form for a chart into flat R^D.

    H = sum_ab G^{ab} (d2F/da db)^perp with G the induced metric and perp
    the Euclidean projection off the tangent span.
    """
    first, second = chart_derivatives(chart, xi0, step)
    dim = len(first)
    G = first @ first.T
    try:
        Ginv = np.linalg.inv(G)
    except np.linalg.LinAlgError:
        raise ChartFailure("degenerate induced metric in flat oracle") from None
    # orthonormal tangent frame for the normal projection
    Q, _ = np.linalg.qr(first.T)
    H = np.zeros(first.shape[1])
    for a in range(dim):
        for b in range(dim):
            H = H + Ginv[a, b] * second[a][b]
    H = H - Q @ (Q.T @ H)
    return H


def christoffel_symbols(metric: Callable[[np.ndarray], np.ndarray],
                        x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Gamma[a, m, n] = 1/2 g^{al} (d_m g_{ln} + d_n g_{lm} - d_l g_{mn}),
    with the metric derivatives by central differences."""
    x = np.asarray(x, dtype=float)
    dim = len(x)
    g0 = np.asarray(metric(x), dtype=float)
    dg = np.zeros((dim, dim, dim))
    for m in range(dim):
        xp, xm = x.copy(), x.copy()
        xp[m] += step
        xm[m] -= step
        dg[m] = (np.asarray(metric(xp)) - np.asarray(metric(xm))) / (2.0 * step)
    ginv = np.linalg.inv(g0)
    gamma = np.zeros((dim, dim, dim))
    for a in range(dim):
        for m in range(dim):
            for n in range(dim):
                s = 0.0
                for l in range(dim):
                    s += ginv[a, l] * (dg[m, l, n] + dg[n, l, m] - dg[l, m, n])
                gamma[a, m, n] = 0.5 * s
    return gamma


def mean_curvature_riemannian(chart: ChartMap, xi0: np.ndarray,
                              metric: Callable[[np.ndarray], np.ndarray],
                              step: float = 1e-5,
                              metric_step: float = 1e-5):
    """Trace of the second fundamental form in a curved ambient metric.

    The chart maps parameters to ambient coordinates; the ambient covariant
    second derivative is d2F + Gamma(F) dF dF, projected off the tangent
    span with respect to the ambient metric.  Returns (H, norm_of_H).
    """
    first, second = chart_derivatives(chart, xi0, step)
    dim, amb = first.shape
    x0 = np.asarray(chart(xi0), dtype=float)
    g = np.asarray(metric(x0), dtype=float)
    gamma = christoffel_symbols(metric, x0, metric_step)
    G = first @ g @ first.T
    try:
        Ginv = np.linalg.inv(G)
    except np.linalg.LinAlgError:
        raise ChartFailure("degenerate induced metric in curved oracle") from None
    H = np.zeros(amb)
    for a in range(dim):
        for b in range(dim):
            cov = second[a][b] + np.einsum("amn,m,n->a", gamma, first[a], first[b])
            H = H + Ginv[a, b] * cov
    # metric-orthogonal projection off the tangent span
    coeff = np.linalg.solve(G, first @ g @ H)
    H = H - first.T @ coeff
    norm = float(np.sqrt(max(0.0, H @ g @ H)))
    return H, norm
