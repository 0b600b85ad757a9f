#!/usr/bin/env python3
"""
Surgery-neck h4 expansions and bending-schedule planner
=======================================================

Leading-order formulas only: every O(.) remainder of the neck expansion is
dropped, so every value produced here is labelled "leading-order".

- h4_neck_leading / h4_neck_lower_bound: h4 of the neck hypersurface in terms
  of the tube radius r, the angle theta and the curve curvature k;
- norm_expansions: the |R|^2, |Ric|^2, scal^2 leading polynomials in
  x = sin(theta)/r and k, and their h4 combination;
- plan_bending: alternating straight runs and capped-curvature bumps
  taking theta from theta0 to pi/2 while k < sin(theta)/(2r);
- submersion_scaling_check: exact h4 of t^2 g_F + g_B for product models.
"""

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

from hwi_curvature import CurvatureTensor, h4_formal, scalar_curv
from hwi_dfcore import Scalar, exact, exact_tree, quotient
from hwi_errors import NeckError
from hwi_models import constant_curvature_h2q, product_tensor, scale_metric

log = logging.getLogger(__name__)

HALF_PI = math.pi / 2
MIN_CODIMENSION = 5
CSV_FIELDS = ['s', 'r', 't', 'theta', 'k', 'h4_leading', 'h4_lower_bound']
K_TERM_NOTE = ('recombining the printed |Ric|^2 and scal^2 k-terms gives '
               '+(q-1)(q-2)(q-3)k sin^3(theta)/(2r^3); the h4 expansion prints it with a minus sign. '
               'The planner follows the printed (conservative) sign.')

# monomial keys (i, j) stand for x^i k^j with x = sin(theta)/r
X4 = (4, 0)
X2K2 = (2, 2)
X3K = (3, 1)


@dataclass(frozen=True)
class NeckParams:
    m: int
    q: int
    r: float
    theta: float = 0.0
    k: float = 0.0
    h4_base: float = 0.0

    def __post_init__(self):
        if self.r <= 0:
            raise NeckError(f'tube radius must be positive, got r={self.r}')
        if not -1e-12 <= self.theta <= HALF_PI + 1e-12:
            raise NeckError(f'theta must lie in [0, pi/2], got {self.theta}')
        if self.k < 0:
            raise NeckError(f'curve curvature must be nonnegative, got k={self.k}')
        if self.q < 1:
            raise NeckError(f'codimension must be positive, got q={self.q}')

    @classmethod
    def for_sphere(cls, m: int, q: int, r: float, theta: float = 0.0, k: float = 0.0) -> 'NeckParams':
        """h4_base of S^m(1) x flat D^q, which is h4 of S^m(1) (zero for m < 4)."""
        base = float(constant_curvature_h2q(m, 1, 2)) if m >= 4 else 0.0
        return cls(m, q, r, theta, k, base)


@dataclass(frozen=True)
class NeckState:
    s: float
    r: float
    t: float
    theta: float
    k: float


# ---------------------------------------------------------------------------
# closed-form leading terms

def h4_neck_leading(p: NeckParams) -> float:
    q, r = p.q, p.r
    sin = math.sin(p.theta)
    quartic = (q - 1) * (q - 2) * (q - 3) * (q - 4) / (4 * r ** 4) * sin ** 4
    cubic = (q - 1) * (q - 2) * (q - 3) * p.k / (2 * r ** 3) * sin ** 3
    return p.h4_base + quartic - cubic


def h4_neck_lower_bound(p: NeckParams) -> float:
    if p.q < MIN_CODIMENSION:
        raise NeckError(f'the lower bound is derived for q >= {MIN_CODIMENSION}, got q={p.q}')
    q, r = p.q, p.r
    sin = math.sin(p.theta)
    return p.h4_base + (q - 1) * (q - 2) * (q - 3) / (2 * r ** 3) * sin ** 3 * (sin / (2 * r) - p.k)


def k_cap(r: float, theta: float) -> float:
    return math.sin(theta) / (2 * r)


@dataclass(frozen=True)
class NormExpansion:
    """Leading coefficients keyed by (i, j) for x^i k^j, x = sin(theta)/r; base norms omitted."""
    q: int
    riemann: Dict[Tuple[int, int], Fraction]
    ricci: Dict[Tuple[int, int], Fraction]
    scalar_sq: Dict[Tuple[int, int], Fraction]
    combination: Dict[Tuple[int, int], Fraction]
    note: str = K_TERM_NOTE

    def evaluate(self, which: str, r: float, theta: float, k: float) -> float:
        x = math.sin(theta) / r
        poly = getattr(self, which)
        return sum(float(c) * x ** i * k ** j for (i, j), c in poly.items())


def _expansions_for(q: int) -> NormExpansion:
    q = Fraction(q)
    riemann = {X4: (q - 1) * (q - 2) / 2, X2K2: q - 1}
    ricci = {X4: (q - 1) * (q - 2) ** 2, X2K2: q * (q - 1), X3K: -(q - 1) * (q - 2) ** 2}
    scalar_sq = {X4: (q - 1) ** 2 * (q - 2) ** 2, X2K2: 4 * (q - 1) ** 2, X3K: -2 * (q - 1) ** 2 * (q - 2)}
    combination = {}
    for key in (X4, X2K2, X3K):
        combination[key] = riemann.get(key, 0) - ricci.get(key, 0) + scalar_sq.get(key, 0) / 4
    return NormExpansion(int(q), riemann, ricci, scalar_sq, combination)


def norm_expansions(p: NeckParams) -> NormExpansion:
    return _expansions_for(p.q)


def quartic_coefficient(q: int) -> Fraction:
    """(q-1)(q-2)(q-3)(q-4)/4, the sin^4/r^4 coefficient of the h4 expansion."""
    return Fraction((q - 1) * (q - 2) * (q - 3) * (q - 4), 4)


def printed_cubic_coefficient(q: int) -> Fraction:
    """Coefficient of k sin^3/r^3 as printed in the h4 expansion (negative)."""
    return -Fraction((q - 1) * (q - 2) * (q - 3), 2)


# ---------------------------------------------------------------------------
# bending schedule

@dataclass(frozen=True)
class KCapPolicy:
    plateau_fraction: float = 0.9
    # share of the bump arc taken by each linear ramp
    ramp_fraction: float = 0.2
    # straight run before each bump, as a fraction of the current r
    straight_fraction: float = 0.1
    step_divisor: int = 1000
    min_bump_steps: int = 8
    max_bumps: int = 10_000
    theta_tolerance: float = 1e-9

    def profile(self, u: float) -> float:
        if self.ramp_fraction <= 0:
            return 1.0
        return max(0.0, min(1.0, u / self.ramp_fraction, (1.0 - u) / self.ramp_fraction))


@dataclass(frozen=True)
class BumpRecord:
    index: int
    s_start: float
    r_start: float
    theta_start: float
    plateau_k: float
    delta_s: float
    delta_r: float
    delta_theta: float

    @property
    def delta_theta_cap(self) -> float:
        return math.sin(self.theta_start) / 4


@dataclass
class BendingPlan:
    q: int
    r_start: float
    theta0: float
    h4_base: float
    policy: KCapPolicy
    states: List[NeckState] = field(default_factory=list)
    bumps: List[BumpRecord] = field(default_factory=list)
    feasible: bool = False
    reason: str = ''
    checks: Dict[str, bool] = field(default_factory=dict)

    def params(self, state: NeckState) -> NeckParams:
        return NeckParams(0, self.q, state.r, min(state.theta, HALF_PI), state.k, self.h4_base)

    def rows(self) -> Iterator[Dict[str, float]]:
        for st in self.states:
            p = self.params(st)
            yield {
                's': st.s, 'r': st.r, 't': st.t, 'theta': st.theta, 'k': st.k,
                'h4_leading': h4_neck_leading(p), 'h4_lower_bound': h4_neck_lower_bound(p),
            }

    @property
    def min_lower_bound(self) -> float:
        return min((row['h4_lower_bound'] for row in self.rows()), default=float('nan'))

    @property
    def final_theta(self) -> float:
        return self.states[-1].theta if self.states else self.theta0

    def summary(self) -> Dict:
        return {
            'order': 'leading-order',
            'q': self.q, 'r_start': self.r_start, 'theta0': self.theta0, 'h4_base': self.h4_base,
            'feasible': self.feasible, 'reason': self.reason,
            'bumps': len(self.bumps), 'steps': len(self.states),
            'final_theta': self.final_theta,
            'final_r': self.states[-1].r if self.states else self.r_start,
            'min_lower_bound': self.min_lower_bound,
            'checks': dict(self.checks),
            'k_term_note': K_TERM_NOTE,
        }


class _Integrator:
    """Forward-Euler stepping of dr/ds = -sin(theta), dt/ds = cos(theta), dtheta/ds = k."""

    def __init__(self, r: float, theta: float):
        self.state = NeckState(0.0, r, 0.0, theta, 0.0)
        self.states = [self.state]

    def step(self, h: float, k: float) -> None:
        st = self.state
        theta = st.theta + k * h
        self.state = NeckState(st.s + h, st.r - math.sin(st.theta) * h, st.t + math.cos(st.theta) * h, theta, k)
        self.states.append(self.state)

    def straight(self, length: float, h: float) -> None:
        steps = max(1, math.ceil(length / h))
        for _ in range(steps):
            self.step(length / steps, 0.0)


def plan_bending(q: int, r_start: float, theta0: float, policy: Optional[KCapPolicy] = None,
                 h4_base: float = 0.0) -> BendingPlan:
    policy = policy or KCapPolicy()
    if q < MIN_CODIMENSION:
        raise NeckError(f'bending plan needs codimension q >= {MIN_CODIMENSION}, got q={q}')
    if r_start <= 0:
        raise NeckError(f'r_start must be positive, got {r_start}')
    if not 0 < theta0 < HALF_PI:
        raise NeckError(f'theta0 must lie in (0, pi/2), got {theta0}')
    if h4_base < 0:
        raise NeckError(f'h4_base must be nonnegative, got {h4_base}')

    plan = BendingPlan(q, r_start, theta0, h4_base, policy)
    h = r_start / policy.step_divisor
    run = _Integrator(r_start, theta0)
    tol = policy.theta_tolerance

    while HALF_PI - run.state.theta > tol:
        if len(plan.bumps) >= policy.max_bumps:
            plan.reason = f'no total bend after {policy.max_bumps} bumps'
            break
        run.straight(policy.straight_fraction * run.state.r, h)

        start = run.state
        length = start.r / 2
        steps = max(policy.min_bump_steps, math.ceil(length / h))
        hb = length / steps
        shape = [policy.profile((i + 0.5) / steps) for i in range(steps)]
        area = sum(shape) * hb
        cap = policy.plateau_fraction * k_cap(start.r, start.theta)
        delta = min(cap * area, HALF_PI - start.theta)
        if delta < tol:
            plan.reason = f'bend per bump {delta:.3g} underflows tolerance {tol:g} at theta={start.theta:.6g}'
            break
        kappa = delta / area
        for f in shape:
            run.step(hb, kappa * f)
        end = run.state
        plan.bumps.append(BumpRecord(len(plan.bumps), start.s, start.r, start.theta, kappa,
                                     end.s - start.s, start.r - end.r, end.theta - start.theta))
        log.debug('bump %d: r=%.6g theta=%.6g -> %.6g k=%.6g', len(plan.bumps), start.r,
                  start.theta, end.theta, kappa)

    plan.states = run.states
    if not plan.reason:
        last = plan.states[-1]
        plan.states[-1] = NeckState(last.s, last.r, last.t, HALF_PI, last.k)
        plan.feasible = True
    plan.checks = check_plan(plan)
    if plan.feasible and not all(plan.checks.values()):
        failed = [name for name, ok in plan.checks.items() if not ok]
        plan.feasible = False
        plan.reason = 'invariant violated: ' + ', '.join(failed)
    log.info('bending plan q=%d r=%g theta0=%g: feasible=%s bumps=%d', q, r_start, theta0,
             plan.feasible, len(plan.bumps))
    return plan


def check_plan(plan: BendingPlan) -> Dict[str, bool]:
    states = plan.states
    eps = 1e-12
    pairs = list(zip(states, states[1:]))
    return {
        'theta_nondecreasing': all(b.theta >= a.theta - eps for a, b in pairs),
        'r_nonincreasing': all(b.r <= a.r + eps for a, b in pairs),
        'r_positive': all(st.r > 0 for st in states),
        'k_below_cap': all(st.k < k_cap(st.r, min(st.theta, HALF_PI)) for st in states if st.k > 0),
        'bump_dr_le_ds': all(b.delta_r <= b.delta_s + eps for b in plan.bumps),
        'bump_r_above_half': all(b.r_start - b.delta_r >= b.r_start / 2 for b in plan.bumps),
        'bump_dtheta_capped': all(b.delta_theta <= b.delta_theta_cap + eps for b in plan.bumps),
        'final_theta_reached': bool(states) and abs(states[-1].theta - HALF_PI) <= plan.policy.theta_tolerance,
        'lower_bound_positive': all(row['h4_lower_bound'] > 0 for row in plan.rows()),
    }


def write_plan_csv(plan: BendingPlan, out: TextIO) -> int:
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS)
    writer.writeheader()
    count = 0
    for row in plan.rows():
        writer.writerow({key: f'{value:.17g}' for key, value in row.items()})
        count += 1
    return count


def neck_sweep(q: int, r: float, theta0: float, count: int = 8, h4_base: float = 0.0,
               policy: Optional[KCapPolicy] = None, workers: int = 1) -> List[Dict]:
    """Grid eps = r / 2^i: end-of-neck h4 at theta = pi/2, k = 0, and planner feasibility from r = eps."""
    grid = [r / 2 ** i for i in range(count)]

    def row(eps: float) -> Dict:
        final = NeckParams(0, q, eps, HALF_PI, 0.0, h4_base)
        plan = plan_bending(q, eps, theta0, policy, h4_base)
        return {
            'eps': eps,
            'h4_leading_final': h4_neck_leading(final),
            'quartic_term': float(quartic_coefficient(q)) / eps ** 4,
            'feasible': plan.feasible,
            'bumps': len(plan.bumps),
            'min_lower_bound': plan.min_lower_bound,
        }

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(row, grid))
    return [row(eps) for eps in grid]


# ---------------------------------------------------------------------------
# Riemannian submersion scaling, exact product case

@dataclass
class ScalingRow:
    t: Scalar
    h4_t: Scalar
    fiber_term: Scalar
    mixed_term: Scalar
    base_term: Scalar
    residual: Scalar
    rescaled_fiber: Scalar
    ok: bool


@dataclass
class ScalingReport:
    fiber: str
    base: str
    h4_fiber: Scalar
    scal_fiber: Scalar
    scal_base: Scalar
    h4_base: Scalar
    rows: List[ScalingRow]

    @property
    def passed(self) -> bool:
        return all(row.ok for row in self.rows)

    def as_dict(self) -> Dict:
        values = exact_tree({
            'h4_fiber': self.h4_fiber, 'scal_fiber': self.scal_fiber, 'scal_base': self.scal_base,
            'h4_base': self.h4_base, 'rows': [asdict(row) for row in self.rows],
        })
        return {'fiber': self.fiber, 'base': self.base, 'passed': self.passed, **values}


def submersion_scaling_check(fiber: CurvatureTensor, base: CurvatureTensor,
                             t_list: Sequence) -> ScalingReport:
    """h4(t^2 g_F + g_B) - t^-4 h4(F) must equal t^-2 scal_F scal_B / 2 + h4(B) exactly."""
    h4_f, h4_b = h4_formal(fiber), h4_formal(base)
    scal_f, scal_b = scalar_curv(fiber), scalar_curv(base)
    rows = []
    for t in t_list:
        t = exact(t)
        if t <= 0:
            raise NeckError(f'scaling parameter must be positive, got {t}')
        model = product_tensor(scale_metric(fiber, t * t), base)
        h4_t = h4_formal(model)
        fiber_term = quotient(h4_f, t ** 4)
        mixed_term = quotient(scal_f * scal_b, 2 * t ** 2)
        residual = h4_t - fiber_term - mixed_term
        rescaled = (h4_t - h4_b - mixed_term) * t ** 4
        rows.append(ScalingRow(t, h4_t, fiber_term, mixed_term, h4_b, residual, rescaled,
                               residual == h4_b and rescaled == h4_f))
    return ScalingReport(fiber.label, base.label, h4_f, scal_f, scal_b, h4_b, rows)


def write_rows_csv(rows: Sequence[Dict], out: TextIO) -> None:
    if not rows:
        return
    writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def open_output(path: Optional[Path]):
    if path is None:
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    return path.open('w', encoding='utf-8', newline='')
