"""LO-phase optimization and parameter sweeps.

The LOD landscape over the two LO phases is multimodal with shallow
basins, so optimization seeds a Nelder-Mead simplex from the best cell of
a coarse grid.  Sweeps evaluate a target quantity over a deterministic
cartesian grid and never abort on per-point failures.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import log10, mp, mpf, pi, sqrt, workdps

from .algebra import coherent_expectation, mul
from .circuits import CIRCUITS, InterferometerParams
from .jones import sampling_phase
from .metrology import (
    UndefinedLodError,
    classical_reference,
    lod_db,
    lodi_db,
    report,
    variance,
)

#: precision used for coarse-grid seeding; basins are resolved far above
#: this accuracy and refinement reruns at full precision
GRID_DPS = 30


@dataclass
class OptResult:
    phi_p: mpf
    phi_c: mpf
    value_db: mpf
    grid_value_db: mpf
    iterations: int
    evaluations: int
    converged: bool

    def to_json_dict(self, precision: int) -> dict:
        return {
            "phi_p": mp.nstr(self.phi_p, precision),
            "phi_c": mp.nstr(self.phi_c, precision),
            "value_db": mp.nstr(self.value_db, precision),
            "grid_value_db": mp.nstr(self.grid_value_db, precision),
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
        }


def nelder_mead(f, x0, step, tol=1e-8, max_iter=500):
    """Derivative-free simplex descent on a 2-D objective.

    Standard reflection/expansion/contraction/shrink moves; converges when
    the simplex diameter drops below ``tol``.  Returns (x, fx, iterations,
    evaluations, converged).
    """
    pts = [tuple(x0), (x0[0] + step, x0[1]), (x0[0], x0[1] + step)]
    vals = [f(x) for x in pts]
    evals = 3
    iters = 0
    converged = False
    while iters < max_iter:
        order = sorted(range(3), key=lambda i: vals[i])
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        diam = max(
            max(abs(pts[i][0] - pts[j][0]), abs(pts[i][1] - pts[j][1]))
            for i in range(3)
            for j in range(i + 1, 3)
        )
        if diam < tol:
            converged = True
            break
        iters += 1
        cx = ((pts[0][0] + pts[1][0]) / 2, (pts[0][1] + pts[1][1]) / 2)
        worst = pts[2]
        xr = (2 * cx[0] - worst[0], 2 * cx[1] - worst[1])
        fr = f(xr)
        evals += 1
        if fr < vals[0]:
            xe = (3 * cx[0] - 2 * worst[0], 3 * cx[1] - 2 * worst[1])
            fe = f(xe)
            evals += 1
            if fe < fr:
                pts[2], vals[2] = xe, fe
            else:
                pts[2], vals[2] = xr, fr
        elif fr < vals[1]:
            pts[2], vals[2] = xr, fr
        else:
            xc = ((cx[0] + worst[0]) / 2, (cx[1] + worst[1]) / 2)
            fc = f(xc)
            evals += 1
            if fc < vals[2]:
                pts[2], vals[2] = xc, fc
            else:
                pts = [
                    pts[0],
                    ((pts[0][0] + pts[1][0]) / 2, (pts[0][1] + pts[1][1]) / 2),
                    ((pts[0][0] + pts[2][0]) / 2, (pts[0][1] + pts[2][1]) / 2),
                ]
                vals = [vals[0], f(pts[1]), f(pts[2])]
                evals += 2
    order = sorted(range(3), key=lambda i: vals[i])
    best = order[0]
    return pts[best], vals[best], iters, evals, converged


def _lod_objective(p: InterferometerParams, circuit: str, dps: int):
    builder = CIRCUITS[circuit]

    def f(x):
        q = p.replace(phi_p=x[0], phi_c=x[1], precision=dps)
        rep = report(builder, q)
        if rep.lod_db is None:
            return mpf("inf")
        return rep.lod_db

    return f


def _lod_objective_coarse(p: InterferometerParams, circuit: str, dps: int):
    """Grid-seeding objective: three-point derivative, no guard digits.

    Accurate to far below a grid cell's value contrast; the simplex
    refinement reruns the full-precision route.
    """
    builder = CIRCUITS[circuit]

    def f(x):
        q = p.replace(phi_p=x[0], phi_c=x[1], precision=dps)
        with workdps(dps):
            J, state = builder(q, dps=dps)
            m1 = coherent_expectation(J, state)
            m2 = coherent_expectation(mul(J, J), state)
            var = (m2 - m1 * m1).real
            h = mpf(10) ** (-(dps // 3))
            phi0 = sampling_phase(q.theta_f, dps)
            f1, _ = builder(q, phi=phi0 + h, dps=dps)
            f_1, _ = builder(q, phi=phi0 - h, dps=dps)
            d = (coherent_expectation(f1, state) - coherent_expectation(f_1, state)) / (2 * h)
            dsq = abs(d) ** 2
            if dsq == 0:
                return mpf("inf")
            return 10 * log10(sqrt(var / dsq))

    return f


def optimize_phases(
    p: InterferometerParams,
    target: str = "lodi",
    circuit: str = "tsu11",
    grid_n: int = 64,
    tol=1e-8,
    max_iter: int = 500,
) -> OptResult:
    """Minimize LOD or LODI over the LO phases (phi_p, phi_c).

    A ``grid_n`` x ``grid_n`` coarse grid over [-pi, pi)^2 picks the start
    cell (evaluated at reduced precision), then a full-precision simplex
    refines it.  For target "lodi" the classical reference is phase
    independent, so the same sweep shifted by a constant is optimized.
    """
    if target not in ("lod", "lodi"):
        raise ValueError(f"unknown optimization target {target!r}")
    offset = mpf(0)
    if target == "lodi":
        ref = classical_reference(p)
        offset = -ref.lod_db

    coarse = _lod_objective_coarse(p, circuit, min(GRID_DPS, p.precision))
    with workdps(p.precision):
        lo, hi = -pi, pi
        cell = (hi - lo) / grid_n
        best_val, best_xy = None, None
        evals = 0
        for i in range(grid_n):
            x = lo + cell * i
            for j in range(grid_n):
                y = lo + cell * j
                v = coarse((x, y))
                evals += 1
                if best_val is None or v < best_val:
                    best_val, best_xy = v, (x, y)

        fine = _lod_objective(p, circuit, p.precision)
        grid_value = fine(best_xy) + offset
        xy, val, iters, ev2, converged = nelder_mead(
            fine, best_xy, step=cell, tol=tol, max_iter=max_iter
        )
        value = val + offset
        # refinement starts from the best grid vertex and only improves it
        if value > grid_value:
            xy, value = best_xy, grid_value
        return OptResult(
            phi_p=xy[0],
            phi_c=xy[1],
            value_db=value,
            grid_value_db=grid_value,
            iterations=iters,
            evaluations=evals + ev2 + 1,
            converged=converged,
        )


# -- parameter sweeps --------------------------------------------------------


@dataclass(frozen=True)
class AxisSpec:
    """One swept parameter: name, range, point count, linear or log spacing."""

    name: str
    lo: float
    hi: float
    count: int
    log: bool = False

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("axis count must be >= 2")
        if self.log and (self.lo <= 0 or self.hi <= 0):
            raise ValueError("log axis requires positive bounds")

    def points(self, dps: int):
        with workdps(dps):
            lo, hi = mpf(str(self.lo)), mpf(str(self.hi))
            n = self.count
            if self.log:
                llo, lhi = mp.log10(lo), mp.log10(hi)
                return [mpf(10) ** (llo + (lhi - llo) * k / (n - 1)) for k in range(n)]
            return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


#: axis aliases: one sweep name may drive several parameter fields
AXIS_FIELDS = {
    "eta": ("eta_p1", "eta_c1"),
    "gamma_kappa": ("gamma", "kappa"),
}


@dataclass
class SweepGrid:
    """Cartesian sweep specification over interferometer parameters."""

    axes: tuple[AxisSpec, ...]
    base: InterferometerParams
    target: str = "lod"  # lod | lodi | variance
    circuit: str = "tsu11"

    def __post_init__(self):
        if self.target not in ("lod", "lodi", "variance"):
            raise ValueError(f"unknown sweep target {self.target!r}")
        for ax in self.axes:
            if ax.name not in AXIS_FIELDS and ax.name not in {
                "r", "s", "alpha", "beta", "gamma", "kappa", "theta_f",
                "phi_p", "phi_c", "eta_p1", "eta_c1", "eta_p2", "eta_c2",
                "eta_p3", "eta_c3",
            }:
                raise ValueError(f"unknown sweep axis {ax.name!r}")


def _apply_axis(p: InterferometerParams, name: str, value):
    for f in AXIS_FIELDS.get(name, (name,)):
        p = p.replace(**{f: value})
    return p


def _evaluate_target(grid: SweepGrid, p: InterferometerParams):
    if grid.target == "lod":
        return lod_db(grid.circuit, p)
    if grid.target == "lodi":
        return lodi_db(p).lodi_db
    J, state = CIRCUITS[grid.circuit](p)
    return variance(J, state).real


def run_sweep(grid: SweepGrid) -> list[dict]:
    """Evaluate the target on every grid point, in deterministic order.

    Returns one row per point: axis values, "value" (mpf or None) and
    "error" (message or empty).  Failures never abort the sweep.
    """
    rows = []

    def recurse(idx: int, p: InterferometerParams, setting: dict):
        if idx == len(grid.axes):
            row = dict(setting)
            try:
                row["value"] = _evaluate_target(grid, p)
                row["error"] = ""
            except (UndefinedLodError, ValueError, ArithmeticError) as exc:
                row["value"] = None
                row["error"] = str(exc)
            rows.append(row)
            return
        ax = grid.axes[idx]
        for v in ax.points(grid.base.precision):
            recurse(idx + 1, _apply_axis(p, ax.name, v), {**setting, ax.name: v})

    recurse(0, grid.base, {})
    return rows


def vacuum_noise_map(
    p: InterferometerParams,
    axes: tuple[AxisSpec, AxisSpec],
) -> tuple[list[dict], list[dict]]:
    """Tabulate the vacuum-seeded variance over two phase axes.

    Axis names may be phi (the sample phase, via theta_f), phi_p or phi_c.
    Returns (rows, minima) where minima holds, per value of the second
    axis, the first-axis point minimizing the variance.
    """
    if p.alpha != 0 or p.beta != 0:
        raise ValueError("vacuum noise map requires alpha = beta = 0")
    names = {ax.name for ax in axes}
    if not names <= {"phi", "phi_p", "phi_c"}:
        raise ValueError("vacuum map axes must be phi, phi_p or phi_c")

    def at(p0, name, v):
        if name == "phi":
            # positive-slope transduction: theta_f equals the arm phase
            return p0.replace(theta_f=v)
        return p0.replace(**{name: v})

    rows = []
    minima = []
    scan, group = axes
    for gv in group.points(p.precision):
        best = None
        for sv in scan.points(p.precision):
            q = at(at(p, group.name, gv), scan.name, sv)
            J, state = CIRCUITS["vacuum"](q)
            var = variance(J, state).real
            rows.append({scan.name: sv, group.name: gv, "value": var, "error": ""})
            if best is None or var < best["value"]:
                best = {scan.name: sv, group.name: gv, "value": var}
        minima.append(best)
    return rows, minima
