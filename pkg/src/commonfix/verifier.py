"""Numerical certificates for the inequalities behind the iteration.

Every check produces an :class:`InequalityCheck` with explicit left and
right sides, the signed slack ``rhs - lhs``, and a satisfied flag defined
as ``slack >= -tolerance``.  Identities are encoded as a check of
``|lhs - rhs|`` against zero so the same satisfied/slack convention
applies everywhere.

The module covers four layers:

* per-pair growth certificates for the gradual relaxation inequality and
  for the affine envelope of the relaxation gauge phi;
* derived per-power bounds for a map measured against a comparison map,
  expanding both profiles into one affine bound in ||x - y||;
* constructive counterexamples: a witness pair showing the shift-and-root
  operator is not asymptotically nonexpansive in the classical
  multiplicative sense, and an antipodal pair showing that weighted
  midpoint norms can converge without the pair collapsing;
* trajectory-level recursion bounds a_{n+1} <= (1 + b_n) a_n + c_n with
  summable b_n, c_n assembled from the family profiles, checked record by
  record against an actual run.

Finite-horizon diagnostics here are evidence, not proofs: they evaluate
finitely many points of statements quantified over infinitely many.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import MissingConstants, NotAFixedPoint
from .mappings import (
    Mapping,
    TotalAsymptoticProfile,
    iterate_difference_formula,
    nth_power,
    power_s,
    power_t_alpha,
)
from .scheme import IterationConfig, Trace, WeightSchedule
from .space import L1Vector, ProductPoint, l1_norm, product_norm

# Default slack tolerances.
CHECK_TOL = 1e-12
RUN_BOUND_TOL = 1e-10
FIXED_POINT_TOL = 1e-12

# Compound weight sums inside the recursion coefficients are evaluated
# with independent summation indices.
INDEX_NOTE = (
    "compound weight sums in b_n are evaluated with independent inner and "
    "outer summation indices"
)


@dataclass(frozen=True)
class InequalityCheck:
    """One verified inequality: satisfied iff slack = rhs - lhs >= -tolerance."""

    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    tolerance: float
    context: dict

    def to_json(self) -> dict:
        out = {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "satisfied": self.satisfied,
            "tolerance": self.tolerance,
        }
        out.update(
            {k: v for k, v in sorted(self.context.items()) if k not in out}
        )
        return out


def _check(lhs: float, rhs: float, tol: float, context: dict) -> InequalityCheck:
    slack = rhs - lhs
    return InequalityCheck(
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        satisfied=slack >= -tol,
        tolerance=tol,
        context=context,
    )


# ---------------------------------------------------------------------------
# per-pair growth certificates
# ---------------------------------------------------------------------------


def check_total_inequality(
    t_map: Mapping,
    i_map: Mapping | None,
    profile: TotalAsymptoticProfile,
    x: ProductPoint,
    y: ProductPoint,
    n: int,
    tol: float = CHECK_TOL,
) -> InequalityCheck:
    """Certify the gradual relaxation inequality at one pair and power:

        ||T^n x - T^n y|| <= d + mu_n * phi(d) + lam_n,
        d = ||I^n x - I^n y||

    with I the identity when ``i_map`` is None.
    """
    lhs = product_norm(nth_power(t_map, n, x) - nth_power(t_map, n, y))
    if i_map is None:
        d = product_norm(x - y)
    else:
        d = product_norm(nth_power(i_map, n, x) - nth_power(i_map, n, y))
    rhs = d + profile.mu(n) * profile.phi(d) + profile.lam(n)
    return _check(
        lhs,
        rhs,
        tol,
        {
            "equation": "gradual-relaxation",
            "n": n,
            "map": t_map.name,
            "comparison": i_map.name if i_map is not None else "identity",
            "base_distance": d,
        },
    )


def check_linear_growth(
    profile: TotalAsymptoticProfile,
    grid: Sequence[float],
    tol: float = CHECK_TOL,
) -> list[InequalityCheck]:
    """Certify the affine envelope of phi on a grid of gauge arguments.

    Two statements per point xi >= 0: phi(xi) <= M_star * xi whenever
    xi >= M (the conditional bound, emitted only where it applies), and
    phi(xi) <= phi(M) + M_star * xi unconditionally.

    :raises MissingConstants: the profile carries no (M, M_star) pair.
    """
    if profile.linear_bound is None:
        raise MissingConstants("profile has no affine growth constants")
    big_m, m_star = profile.linear_bound
    phi_m = profile.phi(big_m)
    checks: list[InequalityCheck] = []
    for xi in grid:
        xi = float(xi)
        if xi < 0.0:
            raise ValueError(f"gauge arguments must be nonnegative, got {xi!r}")
        val = profile.phi(xi)
        if xi >= big_m:
            checks.append(
                _check(
                    val,
                    m_star * xi,
                    tol,
                    {"equation": "conditional-linear", "xi": xi, "M": big_m, "M_star": m_star},
                )
            )
        checks.append(
            _check(
                val,
                phi_m + m_star * xi,
                tol,
                {"equation": "affine-envelope", "xi": xi, "M": big_m, "M_star": m_star},
            )
        )
    return checks


def iterate_growth_bounds(
    t_map: Mapping,
    i_map: Mapping,
    x: ProductPoint,
    y: ProductPoint,
    n: int,
    tol: float = CHECK_TOL,
) -> tuple[InequalityCheck, InequalityCheck]:
    """Certify the two affine per-power bounds measured in ||x - y||.

    With (mu, lam, phi, M, M_star) the profile of T against I, and
    (mu~, lam~, varphi, N, N_star) the profile of I against the identity:

        ||I^n x - I^n y||  <=  (1 + mu~_n N_star) ||x - y||
                               + mu~_n varphi(N) + lam~_n

        ||T^n x - T^n y||  <=  (1 + mu_n M_star)(1 + mu~_n N_star) ||x - y||
                               + mu~_n (1 + mu_n M_star) varphi(N)
                               + lam~_n (1 + mu_n M_star)
                               + mu_n phi(M) + lam_n

    :raises MissingConstants: either profile lacks its constants pair.
    """
    tp, ip = t_map.profile, i_map.profile
    if tp.linear_bound is None or ip.linear_bound is None:
        raise MissingConstants("both profiles need affine growth constants")
    big_m, m_star = tp.linear_bound
    big_n, n_star = ip.linear_bound
    base = product_norm(x - y)
    mu_n, lam_n = tp.mu(n), tp.lam(n)
    mut_n, lamt_n = ip.mu(n), ip.lam(n)

    i_gap = product_norm(nth_power(i_map, n, x) - nth_power(i_map, n, y))
    i_rhs = (1.0 + mut_n * n_star) * base + mut_n * ip.phi(big_n) + lamt_n
    i_check = _check(
        i_gap,
        i_rhs,
        tol,
        {"equation": "comparison-power-growth", "n": n, "map": i_map.name},
    )

    t_gap = product_norm(nth_power(t_map, n, x) - nth_power(t_map, n, y))
    boost = 1.0 + mu_n * m_star
    t_rhs = (
        boost * (1.0 + mut_n * n_star) * base
        + mut_n * boost * ip.phi(big_n)
        + lamt_n * boost
        + mu_n * tp.phi(big_m)
        + lam_n
    )
    t_check = _check(
        t_gap,
        t_rhs,
        tol,
        {"equation": "power-growth", "n": n, "map": t_map.name},
    )
    return i_check, t_check


# ---------------------------------------------------------------------------
# exact identities of the shift-and-root operator
# ---------------------------------------------------------------------------


def check_iterate_difference_identity(
    alpha: float,
    k: int,
    x: L1Vector,
    y: L1Vector,
    tol: float = CHECK_TOL,
) -> InequalityCheck:
    """Certify the exact iterate-difference identity of T_a as an equality:

        ||T_a^k x - T_a^k y||_1 = a^k (||x - y||_1 + |rt(x_1) - rt(y_1)| - |x_1 - y_1|)

    with rt(s) = sqrt(|s|).  Encoded as |direct - formula| <= tol.
    """
    direct = l1_norm(power_t_alpha(alpha, k, x) - power_t_alpha(alpha, k, y))
    formula = iterate_difference_formula(alpha, k, x, y)
    return _check(
        abs(direct - formula),
        0.0,
        tol,
        {
            "equation": "iterate-difference-identity",
            "alpha": alpha,
            "n": k,
            "direct": direct,
            "formula": formula,
        },
    )


def check_root_gap_chain(
    x: L1Vector, y: L1Vector, tol: float = CHECK_TOL
) -> tuple[InequalityCheck, InequalityCheck]:
    """Certify the square-root gap chain used to dominate the identity:

        |rt(x_1) - rt(y_1)| <= sqrt(| |x_1| - |y_1| |) <= sqrt(||x - y||_1).
    """
    root_gap = abs(math.sqrt(abs(x.first)) - math.sqrt(abs(y.first)))
    mid = math.sqrt(abs(abs(x.first) - abs(y.first)))
    outer = math.sqrt(l1_norm(x - y))
    return (
        _check(root_gap, mid, tol, {"equation": "root-gap-inner"}),
        _check(mid, outer, tol, {"equation": "root-gap-outer"}),
    )


# ---------------------------------------------------------------------------
# witness: gradual relaxation does not imply the multiplicative kind
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessResult:
    """A pair separating additive from multiplicative relaxation.

    For X0 = (0, (x0, 0, ...)) and Y0 = (0, (x0/4, 0, ...)),

        ||S^k X0 - S^k Y0|| = a^k sqrt(x0) / 2,   ||X0 - Y0|| = 3 x0 / 4,

    so the ratio is 2 a^k / (3 sqrt(x0)), which exceeds 1 + lam_k exactly
    when x0 < 4 a^{2k} / (9 (1 + lam_k)^2).  No null sequence lam_k can
    dominate every pair multiplicatively, since x0 may be taken as small
    as desired.
    """

    alpha: float
    k: int
    lam_k: float
    x0: float
    upper_bound: float
    X0: ProductPoint
    Y0: ProductPoint
    separation: float
    image_separation: float
    ratio: float
    ratio_analytic: float
    threshold: float
    exceeds: bool


def witness_non_asymptotic(
    alpha: float,
    k: int,
    lam_k: float,
    x0: float | None = None,
) -> WitnessResult:
    """Construct the witness pair for S at power k against slack lam_k.

    ``x0`` defaults to half the admissible upper bound; an explicit value
    must lie strictly inside (0, bound).  All norms are evaluated directly
    through the operator powers, with the analytic ratio alongside.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"contraction factor must lie in (0, 1), got {alpha!r}")
    if not (isinstance(k, int) and k >= 1):
        raise ValueError(f"power must be a positive integer, got {k!r}")
    if not lam_k > 0.0:
        raise ValueError(f"slack must be positive, got {lam_k!r}")
    bound = 4.0 * alpha ** (2 * k) / (9.0 * (1.0 + lam_k) ** 2)
    if x0 is None:
        x0 = bound / 2.0
    if not 0.0 < x0 < bound:
        raise ValueError(f"x0 must lie in (0, {bound!r}), got {x0!r}")
    big_x = ProductPoint(0.0, (x0,))
    big_y = ProductPoint(0.0, (x0 / 4.0,))
    separation = product_norm(big_x - big_y)
    image_separation = product_norm(
        power_s(alpha, k, big_x) - power_s(alpha, k, big_y)
    )
    ratio = image_separation / separation
    ratio_analytic = 2.0 * alpha**k / (3.0 * math.sqrt(x0))
    threshold = 1.0 + lam_k
    return WitnessResult(
        alpha=alpha,
        k=k,
        lam_k=lam_k,
        x0=x0,
        upper_bound=bound,
        X0=big_x,
        Y0=big_y,
        separation=separation,
        image_separation=image_separation,
        ratio=ratio,
        ratio_analytic=ratio_analytic,
        threshold=threshold,
        exceeds=ratio > threshold,
    )


# ---------------------------------------------------------------------------
# antipodal pair: midpoint norms converge, the pair does not collapse
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleRow:
    n: int
    combined_norm: float
    difference_norm: float


def antipodal_pair_counterexample(
    x: ProductPoint, horizon: int
) -> list[CounterexampleRow]:
    """Rows of the antipodal-pair construction up to the horizon.

    With x_n = x, y_n = -x, and weights t_n = 1/n, the weighted point
    t_n x_n + (1 - t_n) y_n has norm ||x|| * |1 - 2/n|, which converges to
    d = ||x||, while ||x_n - y_n|| stays at 2d.  Norms are computed from
    actual vector arithmetic, not the closed form.
    """
    if not (isinstance(horizon, int) and horizon >= 1):
        raise ValueError(f"horizon must be a positive integer, got {horizon!r}")
    if not product_norm(x) > 0.0:
        raise ValueError("the construction needs a nonzero point")
    minus_x = x * -1.0
    rows: list[CounterexampleRow] = []
    for n in range(1, horizon + 1):
        t = 1.0 / n
        combined = x * t + minus_x * (1.0 - t)
        rows.append(
            CounterexampleRow(
                n=n,
                combined_norm=product_norm(combined),
                difference_norm=product_norm(x - minus_x),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# trajectory recursion bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecursionBound:
    """Coefficients of the distance recursion a_{n+1} <= (1+b_n) a_n + c_n."""

    b: Callable[[int], float]
    c: Callable[[int], float]
    notes: tuple[str, ...] = ()

    def partial_sums(self, horizon: int) -> tuple[float, float]:
        """(sum of b_n, sum of c_n) for n = 1..horizon, as a summability
        diagnostic for the recursion hypotheses."""
        bs = math.fsum(self.b(n) for n in range(1, horizon + 1))
        cs = math.fsum(self.c(n) for n in range(1, horizon + 1))
        return bs, cs


def compute_recursion_bound(cfg: IterationConfig) -> RecursionBound:
    """Assemble b_n and c_n from the family profiles and weight schedules.

    Writing alpha_in, beta_in for the stage weights, (mu_in, lam_in,
    phi_i, M_i, M*_i) for the profile of T_i and (mu~_in, lam~_in,
    varphi_i, N_i, N*_i) for the profile of I_i, and

        B_n = sum_i mu~_in beta_in N*_i,

    the coefficients are

        b_n = sum_i (mu_in alpha_in M*_i + mu~_in alpha_in N*_i + alpha_in B_n)
              + sum_i mu_in mu~_in alpha_in M*_i N*_i
              + (sum_i mu_in alpha_in M*_i) B_n
              + (sum_i mu~_in alpha_in N*_i) B_n

        c_n = (sum_i (mu~_in beta_in varphi_i(N_i) + lam~_in beta_in))
                  * (sum_i alpha_in (1 + mu_in M*_i)(1 + mu~_in N*_i))
              + sum_i (mu~_in alpha_in (1 + mu_in M*_i) varphi_i(N_i)
                       + lam~_in alpha_in (1 + mu_in M*_i))
              + sum_i (mu_in alpha_in phi_i(M_i) + lam_in alpha_in).

    :raises MissingConstants: a family profile lacks its constants pair.
    """
    m = len(cfg.t_family)
    for mp in cfg.t_family + cfg.i_family:
        if mp.profile.linear_bound is None:
            raise MissingConstants(
                f"mapping {mp.name or mp!r} has no affine growth constants"
            )

    def coeffs(n: int) -> tuple[float, float]:
        aw = [cfg.alpha.values(i, n) for i in range(1, m + 1)]
        bw = [cfg.beta.values(i, n) for i in range(1, m + 1)]
        mu = [cfg.t_family[i].profile.mu(n) for i in range(m)]
        lam = [cfg.t_family[i].profile.lam(n) for i in range(m)]
        mut = [cfg.i_family[i].profile.mu(n) for i in range(m)]
        lamt = [cfg.i_family[i].profile.lam(n) for i in range(m)]
        m_star = [cfg.t_family[i].profile.linear_bound[1] for i in range(m)]
        phi_m = [
            cfg.t_family[i].profile.phi(cfg.t_family[i].profile.linear_bound[0])
            for i in range(m)
        ]
        n_star = [cfg.i_family[i].profile.linear_bound[1] for i in range(m)]
        varphi_n = [
            cfg.i_family[i].profile.phi(cfg.i_family[i].profile.linear_bound[0])
            for i in range(m)
        ]

        big_b = math.fsum(mut[i] * bw[i] * n_star[i] for i in range(m))
        sum_t = math.fsum(mu[i] * aw[i] * m_star[i] for i in range(m))
        sum_i = math.fsum(mut[i] * aw[i] * n_star[i] for i in range(m))
        b_n = (
            math.fsum(
                mu[i] * aw[i] * m_star[i]
                + mut[i] * aw[i] * n_star[i]
                + aw[i] * big_b
                for i in range(m)
            )
            + math.fsum(mu[i] * mut[i] * aw[i] * m_star[i] * n_star[i] for i in range(m))
            + sum_t * big_b
            + sum_i * big_b
        )

        c_n = (
            math.fsum(mut[i] * bw[i] * varphi_n[i] + lamt[i] * bw[i] for i in range(m))
            * math.fsum(
                aw[i] * (1.0 + mu[i] * m_star[i]) * (1.0 + mut[i] * n_star[i])
                for i in range(m)
            )
            + math.fsum(
                mut[i] * aw[i] * (1.0 + mu[i] * m_star[i]) * varphi_n[i]
                + lamt[i] * aw[i] * (1.0 + mu[i] * m_star[i])
                for i in range(m)
            )
            + math.fsum(mu[i] * aw[i] * phi_m[i] + lam[i] * aw[i] for i in range(m))
        )
        return b_n, c_n

    return RecursionBound(
        b=lambda n: coeffs(n)[0],
        c=lambda n: coeffs(n)[1],
        notes=(INDEX_NOTE,),
    )


def check_run_bound(
    trace: Trace,
    p: ProductPoint,
    bound: RecursionBound,
    tol: float = RUN_BOUND_TOL,
) -> list[InequalityCheck]:
    """Check a_{n+1} <= (1 + b_n) a_n + c_n along an actual run, with
    a_n = ||x_n - p||.

    The reference point must be a common fixed point: it may move under
    each family member by at most ``FIXED_POINT_TOL``.

    :raises NotAFixedPoint: p moves under some family member.
    """
    cfg = trace.config
    for mp in cfg.t_family + cfg.i_family:
        drift = product_norm(mp.apply(p) - p)
        if drift > FIXED_POINT_TOL:
            raise NotAFixedPoint(
                f"reference point moves by {drift!r} under {mp.name or mp!r}"
            )
    states = [rec.x for rec in trace.records] + [trace.final]
    dists = [product_norm(s - p) for s in states]
    checks: list[InequalityCheck] = []
    for idx, rec in enumerate(trace.records):
        b_n, c_n = bound.b(rec.n), bound.c(rec.n)
        checks.append(
            _check(
                dists[idx + 1],
                (1.0 + b_n) * dists[idx] + c_n,
                tol,
                {
                    "equation": "distance-recursion",
                    "n": rec.n,
                    "a_n": dists[idx],
                    "b_n": b_n,
                    "c_n": c_n,
                    "notes": list(bound.notes),
                },
            )
        )
    return checks


# ---------------------------------------------------------------------------
# finite-horizon collapse diagnostic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CollapseDiagnostic:
    """Finite-horizon evidence about weighted families z_1n, ..., z_mn.

    If the weighted combinations keep norm near a limit d while every
    member stays inside norm d, the members are expected to collapse
    together.  The diagnostic reports the combination norm at the horizon
    (``d_hat``), how far member norms exceed it (``max_norm_excess``), and
    the largest pairwise gap over the tail window.  It is a diagnostic
    over finitely many steps, not a proof of any limit statement.
    """

    d_hat: float
    max_norm_excess: float
    tail_max_pairwise: float
    horizon: int
    tail_start: int
    note: str = "finite-horizon diagnostic, not a proof"


def family_collapse_diagnostic(
    sequences: Sequence[Sequence[ProductPoint]],
    weights: WeightSchedule,
    horizon: int,
) -> CollapseDiagnostic:
    """Evaluate the collapse diagnostic for m sequences and a schedule.

    The schedule's full slot count (m + 1 for family size m) must equal
    the number of sequences; its slots are read as the combination
    weights.  Each sequence must reach the horizon.  The tail window is
    the second half, steps ceil(horizon/2)..horizon.
    """
    count = len(sequences)
    if count < 2:
        raise ValueError("need at least two sequences to compare")
    if weights.size != count:
        raise ValueError(
            f"schedule carries {weights.size} weights for {count} sequences"
        )
    if not (isinstance(horizon, int) and horizon >= 1):
        raise ValueError(f"horizon must be a positive integer, got {horizon!r}")
    for seq in sequences:
        if len(seq) < horizon:
            raise ValueError("every sequence must reach the horizon")

    def combo_norm(n: int) -> float:
        w = weights.weights_at(n)
        total = ProductPoint(0.0, ())
        for j in range(count):
            total = total + sequences[j][n - 1] * w[j]
        return product_norm(total)

    d_hat = combo_norm(horizon)
    max_excess = max(
        product_norm(sequences[j][horizon - 1]) - d_hat for j in range(count)
    )
    tail_start = horizon - horizon // 2
    tail_gap = 0.0
    for n in range(tail_start, horizon + 1):
        for a in range(count):
            for b in range(a + 1, count):
                gap = product_norm(sequences[a][n - 1] - sequences[b][n - 1])
                tail_gap = max(tail_gap, gap)
    return CollapseDiagnostic(
        d_hat=d_hat,
        max_norm_excess=max_excess,
        tail_max_pairwise=tail_gap,
        horizon=horizon,
        tail_start=tail_start,
    )


def checks_to_json(checks: Sequence[InequalityCheck]) -> list[dict]:
    """Serialize a batch of checks for a certificate report."""
    return [c.to_json() for c in checks]
