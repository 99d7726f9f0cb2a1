"""Closed-form optima of two 3-vertex benchmark networks.

Both benchmarks live on the unit triangle: vertices {0, 1, 2}, edges
(0, 1), (0, 2), (1, 2) of unit length, linear metabolic cost.  Benchmark 1
pushes one unit of flow from vertex 0 to vertex 1 while vertex 2 is idle;
benchmark 2 pushes one unit out of vertex 0, a third of it into vertex 1 and
the rest into vertex 2.

With robustness weight mu the optimum switches branches at mu = nu / 2:
below, the pure-energy minimizer (a path / a vee, one edge empty) stays
optimal; above, connectivity pays off and the optimum becomes the symmetric
configuration whose Fiedler eigenvalue is shared between edges.  These exact
values anchor the optimizer's acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .graph import Network, new_network


@dataclass(frozen=True)
class ToyOptimum:
    """Optimal state of a benchmark triangle.

    ``conductivities`` follows the canonical edge order (0,1), (0,2), (1,2);
    ``flux`` is the optimal flow on edge (0, 1).  ``regime`` records which
    side of mu = nu/2 the weights fall on; ``analytic`` is False for the
    numerically tabulated branch of benchmark 2 (0 < mu <= nu/2), where no
    closed form is available and a deterministic grid refinement stands in.
    """

    conductivities: np.ndarray
    flux: float
    F_value: float
    E_value: float
    regime: str
    analytic: bool


def toy1_network() -> Network:
    """Unit triangle with sources (+1, -1, 0)."""
    return new_network(3, [(0, 1), (0, 2), (1, 2)], [1.0, -1.0, 0.0])


def toy2_network() -> Network:
    """Unit triangle with sources (+1, -1/3, -2/3)."""
    return new_network(3, [(0, 1), (0, 2), (1, 2)], [1.0, -1.0 / 3.0, -2.0 / 3.0])


def _check_weights(nu: float, mu: float) -> None:
    if not nu > 0:
        raise ValueError("nu must be positive")
    if not 0.0 <= mu < nu:
        raise ValueError("the augmented objective has no minimizer for mu >= nu")


def toy1_optimum(nu: float, mu: float) -> ToyOptimum:
    """Exact optimum of benchmark 1 for 0 <= mu < nu.

    For mu <= nu/2 the direct edge alone is optimal: C = (1/sqrt(nu), 0, 0)
    with energy 2 sqrt(nu) (the idle vertex may stay disconnected since it
    carries no source).  For mu > nu/2 the two detour edges activate at the
    same conductivity as the direct edge would split, C0 = C1 =
    sqrt(2 / (nu - mu)) / 3, making the Fiedler eigenvalue degenerate.
    """
    _check_weights(nu, mu)
    if mu <= nu / 2.0:
        c0 = 1.0 / sqrt(nu)
        value = 2.0 * sqrt(nu)  # Fiedler value is 0, so F == E
        return ToyOptimum(
            conductivities=np.array([c0, 0.0, 0.0]),
            flux=1.0,
            F_value=value,
            E_value=value,
            regime="below_half",
            analytic=True,
        )
    c = sqrt(2.0 / (nu - mu)) / 3.0
    e_value = 2.0 / (3.0 * c) + 3.0 * nu * c
    return ToyOptimum(
        conductivities=np.array([c, c, c]),
        flux=2.0 / 3.0,
        F_value=e_value - 3.0 * mu * c,  # Fiedler value is 3c there
        E_value=e_value,
        regime="above_half",
        analytic=True,
    )


def _toy2_grid(mu: float):
    """Deterministic grid-plus-refinement minimizer of the reduced benchmark-2
    objective at nu = 1 with the (1, 2) edge empty:

        F(a, b) = (1/9)/a + (4/9)/b + (a + b) - mu * lambda1(a, b, 0).

    Grid step 1e-3 with two tenfold refinements around the incumbent.
    """
    step = 1e-3
    lo_a = lo_b = step
    hi_a = hi_b = 1.6
    best_a = best_b = best_f = None
    for _ in range(3):
        a = np.arange(lo_a, hi_a + 0.5 * step, step)
        b = np.arange(lo_b, hi_b + 0.5 * step, step)
        aa = a[:, None]
        bb = b[None, :]
        lam1 = (aa + bb) - np.sqrt(aa * aa + bb * bb - aa * bb)
        f = (1.0 / 9.0) / aa + (4.0 / 9.0) / bb + (aa + bb) - mu * lam1
        i, j = np.unravel_index(np.argmin(f), f.shape)
        best_a, best_b, best_f = float(a[i]), float(b[j]), float(f[i, j])
        lo_a, hi_a = max(best_a - 2.0 * step, step / 10.0), best_a + 2.0 * step
        lo_b, hi_b = max(best_b - 2.0 * step, step / 10.0), best_b + 2.0 * step
        step /= 10.0
    return best_a, best_b, best_f


def toy2_optimum(nu: float, mu: float) -> ToyOptimum:
    """Optimum of benchmark 2 for 0 <= mu < nu.

    mu = 0 and mu > nu/2 are exact: the vee C = (1/3, 2/3, 0) / sqrt(nu)
    with flux 1/3, and the fully symmetric C = sqrt(14 / (nu - mu)) / 9 with
    flux 4/9 and a doubly degenerate Fiedler eigenvalue.  In between no
    closed form is known; the returned value comes from the grid refinement
    (restricted to the empty (1, 2) edge, where the flux stays exactly 1/3)
    and is flagged ``analytic=False``.

    A uniform rescaling C -> C/sqrt(nu) maps the problem at (nu, mu) onto
    (1, mu/nu) with objective values scaled by sqrt(nu), which is how the
    tabulated branch handles general nu.
    """
    _check_weights(nu, mu)
    root = sqrt(nu)
    if mu == 0.0:
        value = 2.0 * root
        return ToyOptimum(
            conductivities=np.array([1.0 / 3.0, 2.0 / 3.0, 0.0]) / root,
            flux=1.0 / 3.0,
            F_value=value,
            E_value=value,
            regime="below_half",
            analytic=True,
        )
    if mu > nu / 2.0:
        c = sqrt(14.0 / (nu - mu)) / 9.0
        f_value = 2.0 / 3.0 * sqrt(14.0 * (nu - mu))
        return ToyOptimum(
            conductivities=np.array([c, c, c]),
            flux=4.0 / 9.0,
            F_value=f_value,
            E_value=f_value + 3.0 * mu * c,  # Fiedler value 3c, double
            regime="above_half",
            analytic=True,
        )
    a, b, f_reduced = _toy2_grid(mu / nu)
    lam1 = (a + b) - sqrt(a * a + b * b - a * b)
    e_reduced = f_reduced + (mu / nu) * lam1
    return ToyOptimum(
        conductivities=np.array([a, b, 0.0]) / root,
        flux=1.0 / 3.0,
        F_value=root * f_reduced,
        E_value=root * e_reduced,
        regime="below_half",
        analytic=False,
    )
