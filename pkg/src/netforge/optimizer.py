"""Projected subgradient minimization of the robustness-augmented energy.

With the linear metabolic cost the transport energy is convex and the Fiedler
number of the conductivity-weighted Laplacian is concave, so

    F[C] = E[C] - mu * lmin * (|V| - 1) / 2 * fiedler[C]

is convex but generally nonsmooth (eigenvalue crossings).  The minimizer is a
projected subgradient method: diminishing steps tau_0 / sqrt(k), entrywise
clamping at zero, and best-iterate tracking, since subgradient steps do not
monotonically descend.  Iterates that leave the solvable set (or make the
flow solve ill-conditioned) trigger a restart from the best feasible iterate
with a reduced tau_0.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg.lapack import dposv

from .energy import energy
from .errors import DisconnectedSupportError
from .graph import (
    Conductivities,
    ModelParams,
    Network,
    connected_components,
    edge_values,
)
from .kirchhoff import COMPONENT_BALANCE_RTOL, RESIDUAL_RTOL, solve_kirchhoff, solve_pressures
from .spectral import fiedler_pair, laplacian, spectral_decompose

MAX_RESTARTS = 10

#: the run counts as diverged once max(C) exceeds this times the initial scale
DIVERGENCE_FACTOR = 1e8


@dataclass(frozen=True)
class OptimConfig:
    """Knobs of one optimizer run.

    tau0
        Initial step scale; the step at (per-restart) index k is tau0/sqrt(k).
    iters
        Total iteration budget K (shared across restarts); iterates
        0 .. K are evaluated.
    seed
        Seed of the uniform(0, 1) conductivity initialization.
    restart_shrink
        Factor applied to tau0 on every restart.
    zero_threshold
        Relative cutoff used when counting active edges in the trace.
    trace_stride
        A trace record is stored every this many iterations, at every
        improvement of the best value, and at the final iterate.
    """

    tau0: float = 0.1
    iters: int = 100_000
    seed: int = 0
    restart_shrink: float = 0.5
    zero_threshold: float = 1e-8
    trace_stride: int = 1000

    def __post_init__(self):
        if not self.tau0 > 0:
            raise ValueError("tau0 must be positive")
        if self.iters < 1:
            raise ValueError("iters must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if not 0.0 < self.restart_shrink < 1.0:
            raise ValueError("restart_shrink must lie in (0, 1)")
        if self.zero_threshold < 0:
            raise ValueError("zero_threshold must be nonnegative")
        if self.trace_stride < 1:
            raise ValueError("trace_stride must be positive")


@dataclass(frozen=True)
class TraceRecord:
    """One evaluated iterate: objective values, spectral summary and step."""

    k: int
    F: float
    E: float
    E_kin: float
    E_met: float
    fiedler: float
    lambda2: float
    lambda3: float
    multiplicity: int
    active_edges: int
    tau: float


@dataclass
class OptimRun:
    """Result of :func:`optimize`: best iterate, its record, the trace and the
    termination status ('completed', 'restarted_then_completed', 'diverged')."""

    best_C: Conductivities
    best_F: float
    best_record: TraceRecord
    trace: list
    termination: str
    restarts: int


def _require_linear_metabolic(params: ModelParams) -> None:
    if params.gamma != 1.0:
        raise ValueError(
            "the robustness-augmented functional requires gamma == 1 "
            "(it is unbounded below for gamma < 1 with mu > 0)"
        )


def robustness_coefficient(net: Network, params: ModelParams) -> float:
    """Weight mu * lmin * (|V| - 1) / 2 multiplying the Fiedler number."""
    return params.mu * net.min_length * (net.vertex_count - 1) / 2.0


def modified_energy(net: Network, C, params: ModelParams) -> float:
    """The robustness-augmented objective F[C]; +inf when the flow problem is
    unsolvable.  The Fiedler term uses the raw conductivities (not C / L)."""
    _require_linear_metabolic(params)
    breakdown = energy(net, C, params)
    if not math.isfinite(breakdown.total):
        return math.inf
    fied = spectral_decompose(laplacian(net, C)).fiedler
    return breakdown.total - robustness_coefficient(net, params) * fied


def subgradient_step(net: Network, C, params: ModelParams, tau: float) -> Conductivities:
    """One projected subgradient step of size tau:

        C_e <- max(0, C_e + tau ((P_u-P_v)^2/L_e - nu L_e + coef (v_u-v_v)^2))

    with P the pressures at C and v the deterministic Fiedler eigenvector.
    Raises DisconnectedSupportError when the flow problem at C is unsolvable
    (the support has then lost the connectivity it needs to carry S).
    """
    _require_linear_metabolic(params)
    values = edge_values(net, C)
    sol = solve_kirchhoff(net, values)
    if not sol.solvable:
        raise DisconnectedSupportError("subgradient step needs a solvable flow state")

    dp = sol.pressures[net.edge_u] - sol.pressures[net.edge_v]
    direction = dp * dp / net.lengths - params.nu * net.lengths
    coef = robustness_coefficient(net, params)
    if coef != 0.0:
        res = spectral_decompose(laplacian(net, values))
        dv = res.fiedler_vector[net.edge_u] - res.fiedler_vector[net.edge_v]
        direction = direction + coef * dv * dv
    return Conductivities(np.maximum(values + tau * direction, 0.0))


def optimize(net: Network, params: ModelParams, config: OptimConfig) -> OptimRun:
    """Run the projected subgradient method.

    Deterministic given (net, params, config): the only randomness is the
    uniform(0, 1) initialization on every edge, which guarantees a connected
    support at iterate 0.  Divergence (max(C) beyond 1e8 times the initial
    scale) is reported through ``termination``, not raised.
    """
    _require_linear_metabolic(params)
    if net.vertex_count < 2:
        raise ValueError("optimization needs at least two vertices")

    n, m = net.vertex_count, net.edge_count
    eu, ev = net.edge_u, net.edge_v
    L = net.lengths
    inv_L = 1.0 / L
    B = net.incidence
    S = net.sources
    s_scale = float(np.abs(S).max())
    bal_tol = COMPONENT_BALANCE_RTOL * s_scale
    res_tol = RESIDUAL_RTOL * s_scale
    nu = params.nu
    coef = robustness_coefficient(net, params)
    K = config.iters
    stride = config.trace_stride

    rng = np.random.default_rng(config.seed)
    C = rng.uniform(0.0, 1.0, m)
    divergence_cap = DIVERGENCE_FACTOR * max(1.0, float(C.max()))

    def components_of(support):
        return connected_components(
            n, zip(eu[support].tolist(), ev[support].tolist())
        )

    support = C > 0.0
    support_key = support.tobytes()
    comps = components_of(support)
    connected = len(comps) == 1
    support_fresh = True
    nu_L = nu * L

    tau0 = config.tau0
    step_idx = 0
    restarts = 0
    best_F = math.inf
    best_C = None
    best_record = None
    trace = []
    termination = "completed"

    k = 0
    while k <= K:
        weighted = B * C
        lap_flow = (weighted * inv_L) @ B.T

        w = V = lap_raw = None
        if coef != 0.0:
            lap_raw = weighted @ B.T
            w, V = np.linalg.eigh(lap_raw)

        if not support_fresh:
            # a safely positive second eigenvalue of the raw Laplacian
            # certifies a connected support without a union-find pass
            if w is not None and w[1] > 1e-10 * lap_raw.diagonal().max():
                connected = True
                comps = None
            else:
                comps = components_of(support)
                connected = len(comps) == 1
            support_fresh = True

        if connected:
            alpha = lap_flow.trace() / n
            if not alpha > 0.0:
                alpha = 1.0
            _, P, info = dposv(lap_flow + alpha / n, S)
            if info == 0:
                P -= P.sum() / n
            else:
                P = None  # singular to working precision
        else:
            P = solve_pressures(lap_flow, S, comps, bal_tol)
        feasible = P is not None
        if feasible and np.abs(lap_flow @ P - S).max() > res_tol:
            feasible = False  # ill-conditioned solve

        if not feasible:
            # left the solvable set (or the solve degraded): shrink the step
            # scale and resume from the best iterate.  The step index keeps
            # counting so the step size stays below its pre-restart value --
            # resetting it would re-enlarge the steps right next to the
            # boundary that caused the failure and cascade into more restarts.
            restarts += 1
            if restarts > MAX_RESTARTS:
                termination = "restarted_then_completed"
                break
            tau0 *= config.restart_shrink
            C = best_C.copy()
            support = C > 0.0
            support_key = support.tobytes()
            comps = components_of(support)
            connected = len(comps) == 1
            support_fresh = True
            k += 1
            continue

        e_kin = float(P @ S)
        e_met = nu * float(C @ L)
        e_tot = e_kin + e_met

        vec = None
        fied = mult = None
        if coef != 0.0:
            fied, vec, mult = fiedler_pair(w, V)
            F = e_tot - coef * fied
        else:
            F = e_tot

        improved = F < best_F
        if improved or k % stride == 0 or k == K:
            if w is None:  # spectral summary only needed for the record
                w, V = np.linalg.eigh(weighted @ B.T)
                fied, _, mult = fiedler_pair(w, V)
            active = int(
                np.count_nonzero(C > config.zero_threshold * max(float(C.max()), 1.0))
            )
            rec = TraceRecord(
                k=k,
                F=F,
                E=e_tot,
                E_kin=e_kin,
                E_met=e_met,
                fiedler=fied,
                lambda2=float(w[2]) if n > 2 else math.nan,
                lambda3=float(w[3]) if n > 3 else math.nan,
                multiplicity=mult,
                active_edges=active,
                tau=tau0 / math.sqrt(step_idx + 1),
            )
            trace.append(rec)
            if improved:
                best_F = F
                best_C = C.copy()
                best_record = rec

        if k == K:
            break

        step_idx += 1
        tau = tau0 / math.sqrt(step_idx)
        dp = P[eu] - P[ev]
        direction = dp * dp * inv_L - nu_L
        if coef != 0.0:
            dv = vec[eu] - vec[ev]
            direction += coef * dv * dv
        C = np.maximum(C + tau * direction, 0.0)

        if float(C.max()) > divergence_cap:
            termination = "diverged"
            break

        new_key = (C > 0.0).tobytes()
        if new_key != support_key:
            support = C > 0.0
            support_key = new_key
            support_fresh = False
        k += 1

    if termination == "completed" and restarts:
        termination = "restarted_then_completed"

    return OptimRun(
        best_C=Conductivities(best_C),
        best_F=best_F,
        best_record=best_record,
        trace=trace,
        termination=termination,
        restarts=restarts,
    )


@dataclass
class SweepResult:
    """Per-mu optimizer runs and one summary row per mu."""

    mu_values: tuple
    runs: list
    summary: list = field(default_factory=list)


def _sweep_task(args):
    net, params, config = args
    return optimize(net, params, config)


def sweep_mu(net: Network, params_base: ModelParams, mu_values, config: OptimConfig, jobs: int = 1) -> SweepResult:
    """One optimizer run per mu value, with per-run seeds derived from the
    base seed (seed + index).  Runs are independent and may execute in
    parallel worker processes (``jobs`` > 1)."""
    mu_values = tuple(float(mu) for mu in mu_values)
    tasks = [
        (
            net,
            replace(params_base, mu=mu),
            replace(config, seed=config.seed + i),
        )
        for i, mu in enumerate(mu_values)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_sweep_task, tasks))
    else:
        runs = [_sweep_task(t) for t in tasks]

    summary = []
    for mu, run in zip(mu_values, runs):
        rec = run.best_record
        summary.append(
            {
                "mu": mu,
                "F": rec.F,
                "E": rec.E,
                "E_kin": rec.E_kin,
                "E_met": rec.E_met,
                "fiedler": rec.fiedler,
                "lambda2": rec.lambda2,
                "lambda3": rec.lambda3,
                "multiplicity": rec.multiplicity,
                "active_edges": rec.active_edges,
                "termination": run.termination,
                "restarts": run.restarts,
            }
        )
    return SweepResult(mu_values=mu_values, runs=runs, summary=summary)
