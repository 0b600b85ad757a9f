#!/usr/bin/env python3
"""
Verification suites
===================

Each suite exercises one family of identities or sign laws on exact model
tensors and seeded random tensors, and returns a SuiteResult with a pass
flag, the number of checked cases, and a dump of the first failures.

Suites:
- dfcore-identities: metric/star/contraction laws, adjointness, double star,
  inner product via star, c(g^k), associativity, graded commutativity
- lemma21 (alias effective-norms): norms of g^p w for effective w, orthogonality of the parts,
  the star of a curvature tensor in dimension 4
- h4-routes: the three h4 routes and the norm formulas on random tensors
- examples: closed-form h_2q for every model class, product law, scaling
- theorem31 (alias h4-signs): sign of h4 for Einstein and trace-free conformally flat tensors
- theorem-a (alias positivity): sampled p-curvature positivity implies h4 > 0
- neck-coeffs: neck expansion polynomial identities and planner runs
- scaling: exact product-case submersion scaling
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from hwi_config import get_settings
from hwi_curvature import (CurvatureTensor, decompose, einstein_check, h2q, h4, h4_conformally_flat,
                           h4_einstein, h4_formal, norm_formulas)
from hwi_dfcore import (DoubleForm, contract, double_star_sign, hodge_star, inner_product, metric_power,
                        metric_star_sign, norm_sq, product, star_inner_sign)
from hwi_errors import DimensionError, InvariantMismatchError, NeckError
from hwi_models import (conformally_flat, conformally_flat_form, conformally_flat_h2q, constant_curvature,
                        constant_curvature_h2q, einsteinize, flat, hypersurface, hypersurface_h2q,
                        product_h2q, product_h4, product_tensor, random_bianchi, random_double_form,
                        random_symmetric, scale_metric, with_circle)
from hwi_neck import (HALF_PI, K_TERM_NOTE, X2K2, X3K, X4, NeckParams, _expansions_for, h4_neck_leading,
                      h4_neck_lower_bound, plan_bending, printed_cubic_coefficient, quartic_coefficient,
                      submersion_scaling_check)
from hwi_pcurv import (STATUS_CERTIFIED, STATUS_FAILED, STATUS_SAMPLED, find_positive_perturbation,
                       perturbed_sphere, verify_positivity)
from hwi_tensor_io import tensor_to_payload

log = logging.getLogger(__name__)

MAX_FAILURES = 10


@dataclass
class SuiteOptions:
    dims: Optional[List[int]] = None
    seed: int = 0
    samples: int = 0
    workers: int = 1
    plane_samples: int = 10_000

    @classmethod
    def from_settings(cls, dims: Optional[List[int]] = None) -> 'SuiteOptions':
        s = get_settings()
        return cls(dims, s.seed, s.samples, s.workers, s.plane_samples)

    def count(self, default: int) -> int:
        return self.samples if self.samples > 0 else default

    def dimensions(self, default: Sequence[int], minimum: int = 1) -> List[int]:
        dims = list(self.dims) if self.dims else list(default)
        low = [n for n in dims if n < minimum]
        if low:
            raise DimensionError(f'this suite needs n >= {minimum}, got {low}')
        return dims

    def rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, index])


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    cases: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    metrics: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def check(self, ok: bool, what: str, **details) -> bool:
        self.cases += 1
        if not ok:
            self.passed = False
            if len(self.failures) < MAX_FAILURES:
                self.failures.append({'check': what, **details})
            log.warning('%s: %s failed %s', self.name, what, details)
        return ok

    def merge(self, other: 'SuiteResult') -> None:
        self.cases += other.cases
        self.passed = self.passed and other.passed
        self.failures.extend(other.failures[:max(0, MAX_FAILURES - len(self.failures))])

    def as_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.name, 'passed': self.passed, 'cases': self.cases,
            'failures': self.failures, 'notes': self.notes, 'metrics': self.metrics,
            'seconds': round(self.seconds, 3),
        }


def _map(fn: Callable, items: Sequence, workers: int) -> List:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _dump(R: CurvatureTensor) -> Dict:
    return tensor_to_payload(R)


def _random_symmetric_form(n: int, p: int, rng: np.random.Generator) -> DoubleForm:
    a = random_double_form(n, p, p, rng, density=0.6)
    return a + a.transpose()


# ---------------------------------------------------------------------------
# dfcore-identities

def _dfcore_case(n: int, rng: np.random.Generator) -> SuiteResult:
    res = SuiteResult('dfcore-identities')
    p, q = int(rng.integers(0, n)), int(rng.integers(0, n))
    a = random_double_form(n, p, q, rng, density=0.6)
    b = random_double_form(n, p, q, rng, density=0.6)
    up = random_double_form(n, p + 1, q + 1, rng, density=0.6)
    g = metric_power(n, 1)
    case = {'n': n, 'bidegree': [p, q]}

    star_c_star = hodge_star(contract(hodge_star(a)))
    res.check(product(g, a) == star_c_star * metric_star_sign(n, p, q), 'g w = *c*w', **case)
    res.check(inner_product(product(g, a), up) == inner_product(a, contract(up)), 'adjointness', **case)
    res.check(hodge_star(hodge_star(a)) == a * double_star_sign(n, p, q), 'double star', **case)
    ab = inner_product(a, b)
    res.check(ab == hodge_star(product(a, hodge_star(b))).as_scalar(), '<a,b> = *(a.*b)', **case)
    res.check(ab * star_inner_sign(n, p, q) == hodge_star(product(hodge_star(a), b)).as_scalar(),
              '<a,b> = *(*a.b)', **case)

    # small bidegrees keep the triple products inside n
    degs = [(int(rng.integers(0, 3)), int(rng.integers(0, 3))) for _ in range(3)]
    if sum(d[0] for d in degs) <= n and sum(d[1] for d in degs) <= n:
        x, y, z = (random_double_form(n, dp, dq, rng, density=0.6) for dp, dq in degs)
        res.check(product(product(x, y), z) == product(x, product(y, z)), 'associativity',
                  n=n, bidegrees=degs)
        sign = -1 if (degs[0][0] * degs[1][0] + degs[0][1] * degs[1][1]) % 2 else 1
        res.check(product(x, y) == product(y, x) * sign, 'graded commutativity', n=n, bidegrees=degs)
    r = int(rng.integers(0, 3))
    if 2 * r <= n:
        s = _random_symmetric_form(n, r, rng)
        t = _random_symmetric_form(n, max(0, min(2, n // 2 - r)), rng)
        res.check(product(s, t) == product(t, s), 'symmetric ring commutes', n=n)
    return res


def suite_dfcore_identities(opts: SuiteOptions) -> SuiteResult:
    result = SuiteResult('dfcore-identities')
    dims = opts.dimensions((3, 4, 5, 6))
    count = opts.count(200)
    cases = _map(lambda i: _dfcore_case(dims[i % len(dims)], opts.rng(i)), range(count), opts.workers)
    for case in cases:
        result.merge(case)

    for n in dims:
        g = metric_power(n, 1)
        result.check(contract(g).as_scalar() == n, 'c(g) = n', n=n)
        for k in range(1, n + 1):
            result.check(contract(metric_power(n, k)) == metric_power(n, k - 1) * (k * (n - k + 1)),
                         'c(g^k) = k(n-k+1) g^(k-1)', n=n, k=k)
    if 4 in dims:
        g2 = metric_power(4, 2)
        result.check(g2.coeff((1, 2), (1, 2)) == 2, 'g.g at (e1,e2;e1,e2) = 2')
        result.check(contract(contract(g2 * Fraction(1, 2))).as_scalar() == 12, 'c^2(g^2/2) = 12')
        result.check(norm_sq(g2) == 24, '|g^2|^2 = 24')
    result.metrics['random_forms'] = count
    return result


# ---------------------------------------------------------------------------
# lemma21: effective-form norms

def _effective_norm(n: int, r: int, p: int) -> int:
    return math.factorial(p) * math.prod(n - 2 * r - i for i in range(p))


def _effective_norms_case(n: int, rng: np.random.Generator) -> SuiteResult:
    res = SuiteResult('lemma21')
    R = random_bianchi(n, rng)
    parts = decompose(R)
    w0, w1, w2 = parts.omega0, parts.omega1, parts.omega2
    payload = {'n': n, 'tensor': _dump(R)}

    res.check(parts.reconstruct() == R.form, 'reconstruction', **payload)
    res.check(contract(w1).as_scalar() == 0, 'c(w1) = 0', **payload)
    res.check(contract(w2).is_zero(), 'c(w2) = 0', **payload)
    g = metric_power(n, 1)
    g2 = metric_power(n, 2)
    res.check(inner_product(g2 * w0, product(g, w1)) == 0, '<g^2 w0, g w1> = 0', **payload)
    res.check(inner_product(g2 * w0, w2) == 0, '<g^2 w0, w2> = 0', **payload)
    res.check(inner_product(product(g, w1), w2) == 0, '<g w1, w2> = 0', **payload)

    w = random_symmetric(n, rng, traceless=True)
    base = norm_sq(w)
    for p in range(0, n - 1):
        gp = product(metric_power(n, p), w)
        res.check(norm_sq(gp) == _effective_norm(n, 1, p) * base, '|g^p w|^2 for r=1', n=n, p=p)
    base2 = norm_sq(w2)
    for p in range(0, n - 3):
        gp = product(metric_power(n, p), w2)
        res.check(norm_sq(gp) == _effective_norm(n, 2, p) * base2, '|g^p w|^2 for r=2', n=n, p=p)
        if p + 1 <= n - 2:
            res.check(inner_product(product(metric_power(n, p + 1), w), gp) == 0,
                      '<g^(p+1) w1, g^p w2> = 0', n=n, p=p)

    if n == 4:
        star = hodge_star(R.form)
        expected = w2 - product(g, w1) + g2 * w0
        res.check(star == expected, '*R = w2 - g w1 + g^2 w0 in n=4', **payload)
    return res


def suite_effective_norms(opts: SuiteOptions) -> SuiteResult:
    result = SuiteResult('lemma21')
    dims = opts.dimensions((4, 5, 6), minimum=4)
    count = opts.count(60)
    for case in _map(lambda i: _effective_norms_case(dims[i % len(dims)], opts.rng(i)), range(count), opts.workers):
        result.merge(case)
    result.metrics['tensors'] = count
    return result


# ---------------------------------------------------------------------------
# h4-routes

def _routes_case(n: int, rng: np.random.Generator, star_orders: bool) -> SuiteResult:
    res = SuiteResult('h4-routes')
    R = random_bianchi(n, rng)
    try:
        report = h4(R)
        norm_formulas(R)
        if star_orders:
            for q in range(1, n // 2 + 1):
                h2q(R, q, check=True)
        res.check(report.h4_direct == report.h4_decomposed == report.h4_contraction, 'three routes', n=n)
    except InvariantMismatchError as e:
        res.check(False, str(e), values=e.values, tensor=_dump(R))
    return res


def suite_h4_routes(opts: SuiteOptions) -> SuiteResult:
    result = SuiteResult('h4-routes')
    dims = opts.dimensions((4, 5, 6), minimum=4)
    count = opts.count(500)
    # every tenth tensor also runs every h_2q through the star route
    cases = _map(lambda i: _routes_case(dims[i % len(dims)], opts.rng(i), i % 10 == 0), range(count),
                 opts.workers)
    for case in cases:
        result.merge(case)
    result.metrics['tensors'] = count
    return result


# ---------------------------------------------------------------------------
# examples

CONSTANT_LAMBDAS = (Fraction(-2), Fraction(-1), Fraction(1), Fraction(2), Fraction(1, 2))


def _random_values(n: int, rng: np.random.Generator) -> List[Fraction]:
    return [Fraction(int(v)) for v in rng.integers(-3, 4, size=n)]


def suite_examples(opts: SuiteOptions) -> SuiteResult:
    result = SuiteResult('examples')
    dims = opts.dimensions((4, 5, 6, 7, 8), minimum=4)
    per_dim = opts.count(3)

    for n in dims:
        for lam in CONSTANT_LAMBDAS:
            R = constant_curvature(n, lam)
            value = h2q(R, 2, check=False)
            result.check(value == Fraction(n * (n - 1) * (n - 2) * (n - 3), 4) * lam * lam,
                         'constant curvature h4', n=n, lam=lam, value=value)
            for q in range(1, n // 2 + 1):
                result.check(h2q(R, q, check=False) == constant_curvature_h2q(n, lam, q),
                             'constant curvature h_2q', n=n, lam=lam, q=q)

    index = 0
    for n in dims:
        for _ in range(per_dim):
            rng = opts.rng(index)
            index += 1
            eigs = _random_values(n, rng)
            R = hypersurface(eigs)
            for q in range(1, min(3, n // 2) + 1):
                result.check(h2q(R, q, check=False) == hypersurface_h2q(eigs, q),
                             'hypersurface h_2q', eigenvalues=eigs, q=q)
            hs = _random_values(n, rng)
            R = conformally_flat(hs)
            for q in range(1, min(3, n // 2) + 1):
                result.check(h2q(R, q, check=False) == conformally_flat_h2q(hs, q),
                             'conformally flat h_2q', h=hs, q=q)
        ones = conformally_flat([1] * n)
        result.check(h2q(ones, 2, check=False) == constant_curvature_h2q(n, 2, 2),
                     'conformal h = g matches lambda = 2', n=n)

    pairs = opts.count(20)
    for i in range(pairs):
        rng = opts.rng(10_000 + i)
        n1 = int(rng.integers(2, 6))
        n2 = int(rng.integers(2, min(5, 10 - n1) + 1))
        first, second = random_bianchi(n1, rng, terms=2), random_bianchi(n2, rng, terms=2)
        prod = product_tensor(first, second)
        result.check(h4_formal(prod) == product_h4(first, second), 'product h4',
                     first=_dump(first), second=_dump(second))
        if prod.n <= 8:
            for q in range(1, min(2, prod.n // 2) + 1):
                result.check(h2q(prod, q, check=False) == product_h2q(first, second, q),
                             'product binomial law', n1=n1, n2=n2, q=q)

    for n in dims[:2]:
        R = random_bianchi(n, opts.rng(20_000 + n))
        for t in (Fraction(2), Fraction(1, 4), Fraction(3)):
            scaled = scale_metric(R, t)
            for q in range(1, min(3, n // 2) + 1):
                result.check(h2q(scaled, q, check=False) == h2q(R, q, check=False) / t ** q,
                             'metric scaling law', n=n, t=t, q=q)
    result.metrics['product_pairs'] = pairs
    return result


# ---------------------------------------------------------------------------
# theorem31: h4 signs

def _einstein_case(n: int, rng: np.random.Generator) -> SuiteResult:
    res = SuiteResult('theorem31')
    R = einsteinize(random_bianchi(n, rng))
    value = h4_formal(R)
    payload = {'n': n, 'h4': value, 'tensor': _dump(R)}
    res.check(einstein_check(R).is_einstein, 'einsteinized tensor is Einstein', **payload)
    res.check(value >= 0, 'Einstein h4 >= 0', **payload)
    res.check(value != 0 or R.form.is_zero(), 'Einstein h4 = 0 only at zero', **payload)
    res.check(value == h4_einstein(R), 'Einstein closed form', **payload)
    return res


def _conformal_case(n: int, rng: np.random.Generator) -> SuiteResult:
    res = SuiteResult('theorem31')
    h = random_symmetric(n, rng, traceless=True)
    R = conformally_flat_form(h, label=f'conformal-tracefree:{n}')
    value = h4_formal(R)
    payload = {'n': n, 'h4': value, 'h': h.matrix()}
    res.check(value <= 0, 'trace-free conformally flat h4 <= 0', **payload)
    res.check(value != 0 or h.is_zero(), 'conformally flat h4 = 0 only at zero', **payload)
    res.check(value == h4_conformally_flat(R), 'conformally flat closed form', **payload)
    return res


def suite_h4_signs(opts: SuiteOptions) -> SuiteResult:
    result = SuiteResult('theorem31')
    dims = opts.dimensions((4, 5, 6), minimum=4)
    count = opts.count(1000)
    einstein = _map(lambda i: _einstein_case(dims[i % len(dims)], opts.rng(i)), range(count), opts.workers)
    conformal = _map(lambda i: _conformal_case(dims[i % len(dims)], opts.rng(count + i)), range(count),
                     opts.workers)
    for case in einstein + conformal:
        result.merge(case)
    for n in dims:
        zero = flat(n)
        result.check(h4_formal(zero) == 0, 'zero tensor has h4 = 0', n=n)
    result.metrics['einstein_tensors'] = count
    result.metrics['conformal_tensors'] = count
    return result


# ---------------------------------------------------------------------------
# theorem-a: p-curvature positivity

def suite_positivity(opts: SuiteOptions) -> SuiteResult:
    result = SuiteResult('theorem-a')
    dims = opts.dimensions((4, 5, 6), minimum=4)
    count = opts.count(6)
    planes = opts.plane_samples
    statuses: Dict[str, int] = {}
    min_h4 = None

    for n in dims:
        report = verify_positivity(constant_curvature(n, 1), planes, opts.seed, opts.workers)
        result.check(report.status == STATUS_CERTIFIED and report.h4_positive, 'unit sphere certified',
                     **report.as_dict())

    for i in range(count):
        n = dims[i % len(dims)]
        direction = random_bianchi(n, opts.rng(i))
        eps = find_positive_perturbation(constant_curvature(n, 1), direction, planes, seed=opts.seed + i)
        if eps == 0:
            result.notes.append(f'case {i}: no positive perturbation found in n={n}')
            continue
        R = perturbed_sphere(n, direction, eps)
        report = verify_positivity(R, planes, opts.seed + i, opts.workers)
        statuses[report.status] = statuses.get(report.status, 0) + 1
        result.check(not report.counterexample, 'positive s_p implies h4 > 0', eps=eps, tensor=_dump(R),
                     **report.as_dict())
        if report.status == STATUS_SAMPLED:
            min_h4 = report.h4 if min_h4 is None else min(min_h4, report.h4)

    control = verify_positivity(conformally_flat([1, 1, -1, -1]), planes, opts.seed, opts.workers)
    result.check(control.status == STATUS_FAILED and not control.counterexample,
                 'indefinite control leaves the hypothesis unsatisfied', **control.as_dict())
    result.notes.append(f'control {control.label}: min s_{control.p} = {control.min_sp:.6g}, '
                        f'h4 = {control.h4}; hypothesis fails, nothing asserted')

    odd = [n for n in dims if n % 2]
    for n in odd:
        sphere = constant_curvature(n, 1)
        result.check(h4_formal(with_circle(sphere)) == h4_formal(sphere), 'M x S1 keeps h4', n=n)

    result.metrics.update({'perturbed': count, 'plane_samples': planes, 'statuses': statuses,
                           'min_h4_sampled': min_h4})
    return result


# ---------------------------------------------------------------------------
# neck-coeffs

NECK_PLANS = ((5, 1.0, 0.3), (6, 0.5, 0.2))


def suite_neck_coeffs(opts: SuiteOptions) -> SuiteResult:
    result = SuiteResult('neck-coeffs')
    for q in range(2, 13):
        exp = _expansions_for(q)
        comb = exp.combination
        result.check(comb[X4] == quartic_coefficient(q), 'quartic coefficient', q=q, value=comb[X4])
        result.check(comb[X2K2] == 0, 'k^2 term vanishes', q=q, value=comb[X2K2])
        result.check(comb[X3K] == -printed_cubic_coefficient(q), 'recombined k-term is the sign flip',
                     q=q, value=comb[X3K])
        if q == 2:
            result.check(all(v == 0 for poly in (exp.riemann, exp.ricci, exp.scalar_sq)
                             for key, v in poly.items() if key == X4),
                         'q=2 leading coefficients vanish')
    result.notes.append(K_TERM_NOTE)

    for q, r in ((5, 0.1), (7, 0.3)):
        p = NeckParams(4, q, r, 0.0, 0.2, 3.0)
        result.check(h4_neck_leading(p) == p.h4_base, 'theta = 0 gives the base value', q=q, r=r)
    final = NeckParams(4, 5, 0.1, HALF_PI, 0.0, 0.0)
    result.check(math.isclose(h4_neck_leading(final), 6e4, rel_tol=1e-9), 'q=5 eps=0.1 quartic term')
    try:
        h4_neck_lower_bound(NeckParams(4, 4, 0.1, HALF_PI))
        result.check(False, 'q=4 lower bound is refused')
    except NeckError:
        result.check(True, 'q=4 lower bound is refused')

    plans = []
    for q, r, theta0 in NECK_PLANS:
        plan = plan_bending(q, r, theta0)
        summary = plan.summary()
        plans.append({k: summary[k] for k in ('q', 'r_start', 'theta0', 'feasible', 'bumps',
                                              'final_r', 'min_lower_bound')})
        result.check(plan.feasible and summary['min_lower_bound'] > 0, 'bending plan reaches pi/2',
                     **{k: summary[k] for k in ('q', 'r_start', 'theta0', 'reason', 'checks')})
    result.metrics['plans'] = plans
    result.notes.append('all neck values are leading-order')
    return result


# ---------------------------------------------------------------------------
# scaling

SCALING_T = (2, 10, 100)


def suite_scaling(opts: SuiteOptions) -> SuiteResult:
    result = SuiteResult('scaling')
    sphere = constant_curvature(4, 1)
    pairs = [(sphere, sphere), (hypersurface([1, 2, 3]), constant_curvature(3, -1))]
    for i in range(opts.count(3)):
        rng = opts.rng(i)
        pairs.append((random_bianchi(int(rng.integers(2, 6)), rng, terms=2),
                      random_bianchi(int(rng.integers(2, 6)), rng, terms=2)))
    for fiber, base in pairs:
        report = submersion_scaling_check(fiber, base, SCALING_T)
        result.check(report.passed, 'remainder is t^-2 scal_F scal_B / 2 + h4(B)', **report.as_dict())
    anchor = submersion_scaling_check(sphere, sphere, [1, 10])
    result.check(anchor.rows[0].h4_t == 84, 'product value at t = 1', value=anchor.rows[0].h4_t)
    result.check(anchor.rows[1].h4_t == Fraction(67206, 10000), 'S4 x S4 at t = 10', value=anchor.rows[1].h4_t)
    result.metrics['pairs'] = len(pairs)
    return result


SUITES: Dict[str, Callable[[SuiteOptions], SuiteResult]] = {
    'dfcore-identities': suite_dfcore_identities,
    'lemma21': suite_effective_norms,
    'h4-routes': suite_h4_routes,
    'examples': suite_examples,
    'theorem31': suite_h4_signs,
    'theorem-a': suite_positivity,
    'neck-coeffs': suite_neck_coeffs,
    'scaling': suite_scaling,
}

SUITE_ALIASES: Dict[str, str] = {
    'effective-norms': 'lemma21',
    'h4-signs': 'theorem31',
    'positivity': 'theorem-a',
}


def suite_name(name: str) -> str:
    """Canonical suite name for a registered name or alias."""
    name = SUITE_ALIASES.get(name, name)
    if name not in SUITES:
        raise KeyError(name)
    return name


def run_suite(name: str, opts: SuiteOptions) -> SuiteResult:
    name = suite_name(name)
    log.info('running suite %s', name)
    started = time.perf_counter()
    try:
        result = SUITES[name](opts)
    except InvariantMismatchError as e:
        result = SuiteResult(name)
        result.check(False, str(e), values=e.values)
    result.seconds = time.perf_counter() - started
    log.info('suite %s: %s (%d checks, %.2fs)', name, 'pass' if result.passed else 'FAIL',
             result.cases, result.seconds)
    return result


def run_suites(names: Sequence[str], opts: SuiteOptions) -> Dict[str, Any]:
    results = [run_suite(name, opts) for name in names]
    return {
        'passed': all(r.passed for r in results),
        'seed': opts.seed,
        'suites': [r.as_dict() for r in results],
    }


def parse_n_range(text: str) -> List[int]:
    """"4..6" -> [4, 5, 6]; "4,6" -> [4, 6]; "5" -> [5]."""
    text = text.strip()
    try:
        if '..' in text:
            lo, hi = text.split('..', 1)
            dims = list(range(int(lo), int(hi) + 1))
        else:
            dims = [int(v) for v in text.split(',') if v.strip()]
    except ValueError as e:
        raise DimensionError(f'cannot parse dimension range {text!r}') from e
    if not dims:
        raise DimensionError(f'empty dimension range {text!r}')
    return dims

