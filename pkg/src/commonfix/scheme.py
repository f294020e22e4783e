"""Two-stage weighted iteration for finite families of mappings.

Given families T_1..T_m and I_1..I_m on a common admissible set and
weight schedules alpha and beta, one step at index n computes

    y_n     = beta_0n * x_n + sum_i beta_in * I_i^n(x_n)
    x_{n+1} = alpha_0n * x_n + sum_i alpha_in * T_i^n(y_n)

with the n-th step using the n-th powers of the maps.  Step indices start
at n = 1, so the supplied start point is x_1.  A variant with one extra
perturbation term per stage is provided for schedules carrying m + 2
weights.

Runs record a full trace: iterates, auxiliary points, step norms,
displacement defects ||x_n - T_i^n x_n|| and ||x_n - I_i^n x_n||, and
distances to a described fixed-point set.  Termination is by step norm
falling under the configured tolerance or by the step budget running out.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    DomainViolation,
    InfeasibleSchedule,
    LengthMismatch,
    WeightSumViolation,
)
from .mappings import FixedSetDescriptor, Mapping, nth_power
from .space import (
    WEIGHT_TOL,
    AdmissibleSet,
    L1Vector,
    ProductPoint,
    convex_combine,
    in_set,
    l1_norm,
    point_to_json,
    product_norm,
)


@dataclass(frozen=True)
class WeightSchedule:
    """Convex weights per step for one stage of the iteration.

    ``values(j, n)`` is the weight of slot j at step n, where slot 0
    multiplies x_n, slots 1..m multiply the mapped points, and, when
    ``includes_error_term`` is set, slot m + 1 multiplies a perturbation
    point.  For every n the weights must be positive, sum to 1 within
    1e-12, and lie inside the closed box ``bounds``.
    """

    m: int
    kind: str
    values: Callable[[int, int], float]
    bounds: tuple[float, float]
    includes_error_term: bool = False

    @property
    def size(self) -> int:
        return self.m + (2 if self.includes_error_term else 1)

    def weights_at(self, n: int) -> tuple[float, ...]:
        """The full weight tuple for step n, validated on the way out.

        :raises WeightSumViolation: simplex constraint broken at this n.
        :raises InfeasibleSchedule: a weight escapes the box at this n.
        """
        w = tuple(float(self.values(j, n)) for j in range(self.size))
        total = math.fsum(w)
        if abs(total - 1.0) > WEIGHT_TOL or any(not x > 0.0 for x in w):
            raise WeightSumViolation(
                f"weights {w!r} at step {n} sum to {total!r}"
            )
        lo, hi = self.bounds
        for j, x in enumerate(w):
            if not lo <= x <= hi:
                raise InfeasibleSchedule(
                    f"weight {x!r} (slot {j}, step {n}) outside [{lo}, {hi}]"
                )
        return w


def make_schedule(
    kind: str,
    m: int,
    bounds: tuple[float, float],
    weights: Sequence[float] | None = None,
    values: Callable[[int, int], float] | None = None,
    includes_error_term: bool = False,
) -> WeightSchedule:
    """Construct a weight schedule.

    kind "constant" assigns every slot the equal weight 1/(m+1), or
    1/(m+2) with an error slot.  kind "custom" takes either a constant
    ``weights`` list of the full slot count or a callable ``values(j, n)``;
    a callable is spot-checked at the first few steps and further
    validated at every use.

    :raises InfeasibleSchedule: bad bounds, or a weight outside them.
    :raises WeightSumViolation: custom weights break the simplex constraint.
    :raises LengthMismatch: custom weights list has the wrong slot count.
    """
    if not (isinstance(m, int) and m >= 1):
        raise InfeasibleSchedule(f"family size must be a positive integer, got {m!r}")
    lo, hi = float(bounds[0]), float(bounds[1])
    if not 0.0 < lo < hi < 1.0:
        raise InfeasibleSchedule(
            f"bounds must satisfy 0 < lo < hi < 1, got ({lo}, {hi})"
        )
    size = m + (2 if includes_error_term else 1)
    if kind == "constant":
        w = 1.0 / size
        if not lo <= w <= hi:
            raise InfeasibleSchedule(
                f"constant weight {w!r} for m={m} falls outside [{lo}, {hi}]"
            )
        return WeightSchedule(m, "constant", lambda j, n: w, (lo, hi), includes_error_term)
    if kind == "custom":
        if (weights is None) == (values is None):
            raise InfeasibleSchedule(
                "custom schedule needs exactly one of 'weights' or 'values'"
            )
        if weights is not None:
            ws = tuple(float(x) for x in weights)
            if len(ws) != size:
                raise LengthMismatch(
                    f"{len(ws)} weights supplied, {size} slots required"
                )
            total = math.fsum(ws)
            if abs(total - 1.0) > WEIGHT_TOL or any(not x > 0.0 for x in ws):
                raise WeightSumViolation(
                    f"custom weights {ws!r} sum to {total!r}"
                )
            for x in ws:
                if not lo <= x <= hi:
                    raise InfeasibleSchedule(
                        f"custom weight {x!r} outside [{lo}, {hi}]"
                    )
            return WeightSchedule(
                m, "custom", lambda j, n: ws[j], (lo, hi), includes_error_term
            )
        sched = WeightSchedule(m, "custom", values, (lo, hi), includes_error_term)
        for n in range(1, 9):
            sched.weights_at(n)
        return sched
    raise InfeasibleSchedule(f"unknown schedule kind {kind!r}")


@dataclass(frozen=True)
class IterationConfig:
    """Everything a run needs: families, schedules, start, stopping rule.

    ``error_sequences``, when present, is a pair of functions n -> (u_n,
    v_n) supplying the perturbation points for the x-stage and the y-stage
    respectively; both schedules must then carry the extra weight slot.
    """

    t_family: tuple[Mapping, ...]
    i_family: tuple[Mapping, ...]
    alpha: WeightSchedule
    beta: WeightSchedule
    x0: ProductPoint
    max_steps: int = 10000
    tol: float = 1e-8
    fixed_set: FixedSetDescriptor | None = None
    error_sequences: (
        tuple[Callable[[int], ProductPoint], Callable[[int], ProductPoint]] | None
    ) = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "t_family", tuple(self.t_family))
        object.__setattr__(self, "i_family", tuple(self.i_family))


@dataclass(frozen=True)
class TraceRecord:
    """One step of a run.  ``x`` and ``y`` are x_n and y_n; ``step_norm``
    is ||x_{n+1} - x_n||; defects are displacement norms at x_n under the
    n-th powers."""

    n: int
    x: ProductPoint
    y: ProductPoint
    step_norm: float
    t_defects: tuple[float, ...]
    i_defects: tuple[float, ...]
    dist_to_fixset: float | None = None
    dist_to_ref: float | None = None


@dataclass(frozen=True)
class Trace:
    """A completed run: per-step records, the reason the loop stopped,
    the final iterate (the state after the last recorded step), and the
    configuration that produced it."""

    records: tuple[TraceRecord, ...]
    terminated_by: str
    final: ProductPoint
    config: IterationConfig


def _common_domain(cfg: IterationConfig) -> AdmissibleSet:
    domains = [mp.domain for mp in cfg.t_family + cfg.i_family]
    first = domains[0]
    for d in domains[1:]:
        if d != first:
            raise DomainViolation(
                f"family domains disagree: {first!r} vs {d!r}"
            )
    return first


def _validate_config(cfg: IterationConfig) -> AdmissibleSet:
    m = len(cfg.t_family)
    if m == 0 or len(cfg.i_family) != m:
        raise LengthMismatch(
            f"t_family has {m} members, i_family has {len(cfg.i_family)}"
        )
    if cfg.alpha.m != m or cfg.beta.m != m:
        raise LengthMismatch(
            f"schedules sized for m={cfg.alpha.m}/{cfg.beta.m}, families have m={m}"
        )
    has_error_slots = cfg.alpha.includes_error_term or cfg.beta.includes_error_term
    if (cfg.error_sequences is not None) != has_error_slots:
        raise LengthMismatch(
            "error sequences and error weight slots must be supplied together"
        )
    if cfg.error_sequences is not None and not (
        cfg.alpha.includes_error_term and cfg.beta.includes_error_term
    ):
        raise LengthMismatch("both schedules need the error slot, not just one")
    if not cfg.tol > 0.0:
        raise ValueError(f"tolerance must be positive, got {cfg.tol!r}")
    if not (isinstance(cfg.max_steps, int) and cfg.max_steps >= 1):
        raise ValueError(f"max_steps must be a positive integer, got {cfg.max_steps!r}")
    domain = _common_domain(cfg)
    if not in_set(cfg.x0, domain):
        raise DomainViolation(f"start point {cfg.x0!r} outside the common domain")
    return domain


def step(
    x: ProductPoint, n: int, cfg: IterationConfig
) -> tuple[ProductPoint, ProductPoint]:
    """One iteration step at index n >= 1.  Returns (x_{n+1}, y_n).

    Intermediates are never clamped: if y_n or x_{n+1} leaves the common
    admissible set, the configuration is broken and ``DomainViolation``
    is raised.
    """
    domain = cfg.t_family[0].domain
    bw = cfg.beta.weights_at(n)
    i_points = [x] + [nth_power(im, n, x) for im in cfg.i_family]
    y = convex_combine(bw, i_points)
    if not in_set(y, domain):
        raise DomainViolation(f"auxiliary point left the admissible set at step {n}")
    aw = cfg.alpha.weights_at(n)
    t_points = [x] + [nth_power(tm, n, y) for tm in cfg.t_family]
    x_next = convex_combine(aw, t_points)
    if not in_set(x_next, domain):
        raise DomainViolation(f"iterate left the admissible set at step {n}")
    return x_next, y


def step_with_errors(
    x: ProductPoint,
    n: int,
    cfg: IterationConfig,
    u_n: ProductPoint,
    v_n: ProductPoint,
) -> tuple[ProductPoint, ProductPoint]:
    """One perturbed step: each stage takes one extra weighted point,
    u_n for the x-stage and v_n for the y-stage.  Schedules must carry
    m + 2 weights."""
    domain = cfg.t_family[0].domain
    if not (in_set(u_n, domain) and in_set(v_n, domain)):
        raise DomainViolation(
            f"perturbation points must stay inside the admissible set (step {n})"
        )
    bw = cfg.beta.weights_at(n)
    i_points = [x] + [nth_power(im, n, x) for im in cfg.i_family] + [v_n]
    y = convex_combine(bw, i_points)
    if not in_set(y, domain):
        raise DomainViolation(f"auxiliary point left the admissible set at step {n}")
    aw = cfg.alpha.weights_at(n)
    t_points = [x] + [nth_power(tm, n, y) for tm in cfg.t_family] + [u_n]
    x_next = convex_combine(aw, t_points)
    if not in_set(x_next, domain):
        raise DomainViolation(f"iterate left the admissible set at step {n}")
    return x_next, y


def distance_to_fixset(p: ProductPoint, descriptor: FixedSetDescriptor) -> float:
    """Distance from p to the described set in the product norm.

    For a scalar segment the nearest point is (clamped scalar, 0), so the
    distance is the vector norm plus the scalar's distance to the
    interval.  For a single point it is the plain norm difference.
    """
    if descriptor.kind == "scalar_line":
        lo, hi = descriptor.interval  # type: ignore[misc]
        s = p.scalar
        scalar_gap = lo - s if s < lo else (s - hi if s > hi else 0.0)
        return l1_norm(p.vec) + scalar_gap
    return product_norm(p - descriptor.point)  # type: ignore[arg-type]


def reference_point(cfg: IterationConfig) -> ProductPoint | None:
    """The trace's reference fixed point, when a fixed set is described.

    A scalar segment contains one natural reference for a run: the
    projection of the start point, (clamped x0.scalar, 0).
    """
    fs = cfg.fixed_set
    if fs is None:
        return None
    if fs.kind == "scalar_line":
        lo, hi = fs.interval  # type: ignore[misc]
        s = min(max(cfg.x0.scalar, lo), hi)
        return ProductPoint(s, ())
    return fs.point


def run(cfg: IterationConfig) -> Trace:
    """Run the iteration from cfg.x0 with steps n = 1, 2, ...

    Stops when ||x_{n+1} - x_n|| < cfg.tol (terminated_by "tolerance") or
    after cfg.max_steps steps (terminated_by "max_steps").  Every record
    carries the pre-step state x_n, so the state after the last step is
    returned separately as ``Trace.final``.
    """
    _validate_config(cfg)
    ref = reference_point(cfg)
    x = cfg.x0
    records: list[TraceRecord] = []
    terminated = "max_steps"
    for n in range(1, cfg.max_steps + 1):
        if cfg.error_sequences is not None:
            u_fn, v_fn = cfg.error_sequences
            x_next, y = step_with_errors(x, n, cfg, u_fn(n), v_fn(n))
        else:
            x_next, y = step(x, n, cfg)
        t_defects = tuple(
            product_norm(x - nth_power(tm, n, x)) for tm in cfg.t_family
        )
        i_defects = tuple(
            product_norm(x - nth_power(im, n, x)) for im in cfg.i_family
        )
        records.append(
            TraceRecord(
                n=n,
                x=x,
                y=y,
                step_norm=product_norm(x_next - x),
                t_defects=t_defects,
                i_defects=i_defects,
                dist_to_fixset=(
                    distance_to_fixset(x, cfg.fixed_set) if cfg.fixed_set else None
                ),
                dist_to_ref=(product_norm(x - ref) if ref is not None else None),
            )
        )
        x = x_next
        if records[-1].step_norm < cfg.tol:
            terminated = "tolerance"
            break
    return Trace(tuple(records), terminated, x, cfg)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _fmt(x: float | None) -> str:
    # repr round-trips binary floats exactly; None becomes an empty cell.
    return "" if x is None else repr(x)


def write_trace_csv(trace: Trace, path: str) -> None:
    """Write the per-step table.

    Columns: n, step_norm, dist_to_fixset, dist_to_ref, t_defect_1..m,
    i_defect_1..m.  Floats use repr so the file round-trips exactly.
    """
    m = len(trace.config.t_family)
    header = (
        ["n", "step_norm", "dist_to_fixset", "dist_to_ref"]
        + [f"t_defect_{i}" for i in range(1, m + 1)]
        + [f"i_defect_{i}" for i in range(1, m + 1)]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for rec in trace.records:
            writer.writerow(
                [rec.n, _fmt(rec.step_norm), _fmt(rec.dist_to_fixset), _fmt(rec.dist_to_ref)]
                + [_fmt(d) for d in rec.t_defects]
                + [_fmt(d) for d in rec.i_defects]
            )


def read_trace_csv(path: str) -> list[dict]:
    """Read a trace table back into a list of dicts with parsed floats."""
    rows: list[dict] = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed: dict = {"n": int(row["n"])}
            for key, val in row.items():
                if key == "n":
                    continue
                parsed[key] = float(val) if val != "" else None
            rows.append(parsed)
    return rows


def write_states_jsonl(trace: Trace, path: str) -> None:
    """Optionally dump full states, one JSON object per line per step."""
    with open(path, "w") as fh:
        for rec in trace.records:
            fh.write(
                json.dumps(
                    {"n": rec.n, "x": point_to_json(rec.x), "y": point_to_json(rec.y)},
                    sort_keys=True,
                )
            )
            fh.write("\n")
