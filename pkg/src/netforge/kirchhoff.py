"""Flow conservation (Kirchhoff law) on the weighted graph Laplacian.

Pressures solve L[C/L] P = S.  The operator is singular (constant vectors per
connected component of the conductivity support), so each component is solved
with a rank-one deflation that pins the component pressure sum to zero, and
the system is solvable exactly when every component's sources balance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg.lapack import dposv

from .errors import DisconnectedSupportError, IllConditionedError
from .graph import Network, connected_components, edge_values
from .spectral import laplacian

#: per-component source balance is required within this fraction of max|S|
COMPONENT_BALANCE_RTOL = 1e-10

#: a solve whose residual exceeds this fraction of max|S| is rejected
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class FlowSolution:
    """Pressures and fluxes for one conductivity state.

    pressures sum to zero on every connected component of the support graph;
    fluxes hold one value per canonical edge (u, v), positive when flow runs
    u -> v.  When ``solvable`` is False (some component's sources do not
    balance) both arrays are NaN and any downstream energy is infinite.
    """

    pressures: np.ndarray
    fluxes: np.ndarray
    components: tuple
    solvable: bool


def kirchhoff_system(net: Network, C):
    """The symmetric operator and right-hand side of the flow-conservation
    system: (L[C/L], S)."""
    return laplacian(net, C, use_lengths=True), net.sources.copy()


def deflated_solve(lap: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve lap @ P = rhs on the sum-zero subspace for a connected-support
    Laplacian, by adding a scaled all-ones rank-one term.

    The correction shifts only the constant-vector eigenvalue (scaled to the
    operator's magnitude so conditioning is not degraded), leaving the
    sum-zero solution of the original singular system untouched.  The
    corrected matrix is symmetric positive definite, so a Cholesky solve
    applies; its failure means the operator is singular to working precision.
    """
    n = lap.shape[0]
    alpha = lap.trace() / n
    if not alpha > 0.0:
        alpha = 1.0
    _, P, info = dposv(lap + alpha / n, rhs)
    if info != 0:
        raise IllConditionedError("deflated operator is singular to working precision")
    return P - P.sum() / n


def _check_residual(lap, P, S, scale) -> None:
    residual = np.abs(lap @ P - S).max()
    if residual > RESIDUAL_RTOL * scale:
        raise IllConditionedError(
            f"relative solve residual {residual / scale if scale else residual:.3e}"
        )


def solve_pressures(lap, S, comps, balance_tol) -> np.ndarray:
    """Component-wise sum-zero pressure solve, or None when some support
    component's sources do not balance (the system is then unsolvable)."""
    for comp in comps:
        if abs(S[comp].sum()) > balance_tol:
            return None
    if len(comps) == 1:
        return deflated_solve(lap, S)
    P = np.zeros(lap.shape[0])
    for comp in comps:
        if comp.size == 1:
            continue  # isolated balanced vertex: pressure 0
        ix = np.ix_(comp, comp)
        P[comp] = deflated_solve(lap[ix], S[comp])
    return P


def solve_kirchhoff(net: Network, C) -> FlowSolution:
    """Solve the flow-conservation system for the conductivities ``C``.

    Connected components of the support graph (edges with C > 0) are
    identified first.  If every component's sources sum to zero (within
    ``COMPONENT_BALANCE_RTOL * max|S|``) the reduced system is solved per
    component with the sum-zero normalization; otherwise the solution is
    marked unsolvable.  Fluxes follow from Q_e = (C_e / L_e) (P_u - P_v),
    which is zero on every zero-conductivity edge.

    Raises
    ------
    IllConditionedError
        If the assembled solution's residual exceeds ``RESIDUAL_RTOL *
        max|S|`` - the signal for an optimizer to restart.
    """
    values = edge_values(net, C)
    S = net.sources
    scale = np.abs(S).max() if S.size else 0.0

    positive = values > 0.0
    comps = connected_components(
        net.vertex_count,
        zip(net.edge_u[positive].tolist(), net.edge_v[positive].tolist()),
    )
    components = tuple(tuple(comp.tolist()) for comp in comps)

    weights = values / net.lengths
    lap = (net.incidence * weights) @ net.incidence.T
    P = solve_pressures(lap, S, comps, COMPONENT_BALANCE_RTOL * scale)
    if P is None:
        nan_v = np.full(net.vertex_count, np.nan)
        nan_e = np.full(net.edge_count, np.nan)
        return FlowSolution(nan_v, nan_e, components, solvable=False)

    _check_residual(lap, P, S, scale)
    fluxes = weights * (P[net.edge_u] - P[net.edge_v])
    return FlowSolution(P, fluxes, components, solvable=True)


def kirchhoff_continuity_probe(net: Network, C, delta: float) -> float:
    """Empirical Lipschitz estimate of the flux map C -> Q.

    Perturbs each edge conductivity by +/- delta (skipping probes that would
    leave the nonnegative cone or the solvable set) and returns the largest
    observed ||Q' - Q||_inf / delta.  Requires a connected support, where the
    flux map is differentiable and Lipschitz.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    values = edge_values(net, C)
    base = solve_kirchhoff(net, values)
    if len(base.components) != 1:
        raise DisconnectedSupportError("continuity probe requires a connected support")

    worst = 0.0
    for k in range(net.edge_count):
        for sign in (1.0, -1.0):
            perturbed = values.copy()
            perturbed[k] += sign * delta
            if perturbed[k] < 0.0:
                continue
            probe = solve_kirchhoff(net, perturbed)
            if not probe.solvable:
                continue
            worst = max(worst, np.abs(probe.fluxes - base.fluxes).max() / delta)
    return worst
