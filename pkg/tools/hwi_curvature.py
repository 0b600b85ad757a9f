#!/usr/bin/env python3
"""
Algebraic curvature tensors and the H. Weyl invariants
======================================================

A curvature tensor is a symmetric (2,2) double form satisfying the first
Bianchi identity. This module provides Ricci / scalar contractions, the
orthogonal decomposition R = w2 + g.w1 + g^2.w0, the invariants h_2q by
complete contraction and by the star route, and h4 by three independent
routes that must agree.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from hwi_config import get_settings
from hwi_dfcore import (DoubleForm, Scalar, contract, contract_times, first_bianchi_defect,
                        hodge_star, metric_power, norm_sq, power, product, quotient)
from hwi_errors import CurvatureError, DegreeError, DimensionError, InvariantMismatchError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvatureTensor:
    form: DoubleForm
    label: str = 'custom'
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.form.bidegree != (2, 2):
            raise CurvatureError(f'curvature tensor needs bidegree (2,2), got {self.form.bidegree}')
        if not self.validate:
            return
        tol = 0 if self.form.is_exact() else get_settings().tolerance
        if not self.form.is_symmetric(tol):
            raise CurvatureError('form is not slot-symmetric')
        defect = first_bianchi_defect(self.form)
        if defect > tol:
            raise CurvatureError(f'first Bianchi defect {defect} exceeds tolerance {tol}', defect=defect)

    @property
    def n(self) -> int:
        return self.form.n

    def is_exact(self) -> bool:
        return self.form.is_exact()

    def relabel(self, label: str) -> 'CurvatureTensor':
        return CurvatureTensor(self.form, label, validate=False)

    def __add__(self, other: 'CurvatureTensor') -> 'CurvatureTensor':
        return CurvatureTensor(self.form + other.form, f'{self.label}+{other.label}', validate=False)

    def __sub__(self, other: 'CurvatureTensor') -> 'CurvatureTensor':
        return CurvatureTensor(self.form - other.form, f'{self.label}-{other.label}', validate=False)

    def scaled(self, factor: Scalar) -> 'CurvatureTensor':
        return CurvatureTensor(self.form * factor, self.label, validate=False)


@dataclass(frozen=True)
class WeylDecomposition:
    n: int
    omega0: Scalar
    omega1: DoubleForm
    omega2: DoubleForm

    def reconstruct(self) -> DoubleForm:
        g = metric_power(self.n, 1)
        return self.omega2 + product(g, self.omega1) + metric_power(self.n, 2) * self.omega0

    def norms(self) -> Tuple[Scalar, Scalar, Scalar]:
        """(|w2|^2, |w1|^2, |w0|^2) from the parts themselves."""
        return norm_sq(self.omega2), norm_sq(self.omega1), self.omega0 * self.omega0


@dataclass
class InvariantReport:
    n: int
    label: str
    h2q: List[Tuple[int, Scalar]]
    norms: Dict[str, Scalar]
    h4_direct: Scalar
    h4_decomposed: Scalar
    h4_contraction: Scalar
    einstein: Optional['EinsteinCheck'] = None

    @property
    def h4(self) -> Scalar:
        return self.h4_direct


@dataclass(frozen=True)
class EinsteinCheck:
    is_einstein: bool
    deviation: float
    deviation_sq: Scalar


def _agree(a: Scalar, b: Scalar, relative: bool = True) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        settings = get_settings()
        scale = max(1.0, abs(a), abs(b)) if relative else 1.0
        return abs(a - b) <= settings.relative_tolerance * scale
    return a == b


def _require_dimension(R: CurvatureTensor, minimum: int, what: str) -> None:
    if R.n < minimum:
        raise DimensionError(f'{what} is unsupported in dimension {R.n} (needs n >= {minimum})')


# ---------------------------------------------------------------------------
# contractions

def ricci(R: CurvatureTensor) -> DoubleForm:
    return contract(R.form)


def scalar_curv(R: CurvatureTensor) -> Scalar:
    return contract_times(R.form, 2).as_scalar()


def curvature_norms(R: CurvatureTensor) -> Tuple[Scalar, Scalar, Scalar]:
    """(|R|^2, |cR|^2, |c^2 R|^2)."""
    ric = ricci(R)
    scal = contract(ric).as_scalar()
    return norm_sq(R.form), norm_sq(ric), scal * scal


def h4_formal(R: CurvatureTensor) -> Scalar:
    """|R|^2 - |cR|^2 + |c^2R|^2 / 4, defined in every dimension (vanishes for n < 4)."""
    a, b, c = curvature_norms(R)
    return a - b + quotient(c, 4)


# ---------------------------------------------------------------------------
# decomposition

def decompose(R: CurvatureTensor) -> WeylDecomposition:
    _require_dimension(R, 4, 'Weyl decomposition')
    n = R.n
    g = metric_power(n, 1)
    ric = ricci(R)
    scal = contract(ric).as_scalar()
    omega0 = quotient(scal, 2 * n * (n - 1))
    omega1 = (ric - g * quotient(scal, n)) / (n - 2)
    omega2 = R.form - product(g, omega1) - metric_power(n, 2) * omega0
    log.debug('decomposed %s: w0=%s', R.label, omega0)
    return WeylDecomposition(n, omega0, omega1, omega2)


def weyl_norms(R: CurvatureTensor) -> Dict[str, Scalar]:
    w2, w1, w0 = decompose(R).norms()
    return {'omega2': w2, 'omega1': w1, 'omega0': w0}


def norm_formulas(R: CurvatureTensor) -> Tuple[Scalar, Scalar, Scalar]:
    """(|w2|^2, |w1|^2, |w0|^2) from (|R|^2, |cR|^2, |c^2R|^2), cross-checked against decompose()."""
    _require_dimension(R, 4, 'norm formulas')
    n = R.n
    a, b, c = curvature_norms(R)
    w2 = a - quotient(b, n - 2) + quotient(c, 2 * (n - 1) * (n - 2))
    w1 = quotient(b - quotient(c, n), (n - 2) ** 2)
    w0 = quotient(c, 4 * n * n * (n - 1) ** 2)
    direct = decompose(R).norms()
    for name, formula, value in zip(('w2', 'w1', 'w0'), (w2, w1, w0), direct):
        if not _agree(formula, value):
            raise InvariantMismatchError(f'|{name}|^2 formula disagrees with the decomposition',
                                         {'formula': formula, 'direct': value})
    return w2, w1, w0


# ---------------------------------------------------------------------------
# H. Weyl invariants

def h2q(R: CurvatureTensor, q: int, check: bool = True) -> Scalar:
    """c^{2q}(R^q)/(2q)!, cross-checked against *(g^{n-2q} R^q)/(n-2q)!."""
    n = R.n
    if q < 0 or 2 * q > n:
        raise DegreeError(f'h_{2 * q} needs 0 <= 2q <= n, got q={q}, n={n}')
    if q == 0:
        return 1
    rq = power(R.form, q)
    by_contraction = quotient(contract_times(rq, 2 * q).as_scalar(), math.factorial(2 * q))
    if check:
        by_star = quotient(hodge_star(product(metric_power(n, n - 2 * q), rq)).as_scalar(),
                           math.factorial(n - 2 * q))
        if not _agree(by_contraction, by_star):
            raise InvariantMismatchError(f'h_{2 * q}: contraction and star routes disagree',
                                         {'contraction': by_contraction, 'star': by_star})
    return by_contraction


def h4(R: CurvatureTensor, orders: Optional[Sequence[int]] = None) -> InvariantReport:
    """h4 by |R|^2-|cR|^2+|c^2R|^2/4, by the w-norm combination and by complete contraction."""
    _require_dimension(R, 4, 'h4')
    n = R.n
    a, b, c = curvature_norms(R)
    direct = a - b + quotient(c, 4)
    omega = weyl_norms(R)
    w2, w1, w0 = omega['omega2'], omega['omega1'], omega['omega0']
    decomposed = quotient(math.factorial(n) * w0 - math.factorial(n - 2) * w1 + math.factorial(n - 4) * w2,
                          math.factorial(n - 4))
    by_contraction = h2q(R, 2)
    values = {'direct': direct, 'decomposed': decomposed, 'contraction': by_contraction}
    if not (_agree(direct, decomposed) and _agree(direct, by_contraction)):
        raise InvariantMismatchError(f'h4 routes disagree for {R.label}', values)
    orders = (1, 2) if orders is None else orders
    table = [(q, by_contraction if q == 2 else h2q(R, q)) for q in orders]
    norms = {'R': a, 'cR': b, 'c2R': c, 'omega0': w0, 'omega1': w1, 'omega2': w2}
    return InvariantReport(n, R.label, table, norms, direct, decomposed, by_contraction,
                           einstein=einstein_check(R))


def einstein_check(R: CurvatureTensor, tol: Optional[float] = None) -> EinsteinCheck:
    """Frobenius norm of cR - (c^2R/n) g, i.e. (n-2)|w1|."""
    ric = ricci(R)
    scal = contract(ric).as_scalar()
    traceless = ric - metric_power(R.n, 1) * quotient(scal, R.n)
    dev_sq = norm_sq(traceless)
    deviation = math.sqrt(float(dev_sq))
    if R.is_exact():
        ok = dev_sq == 0
    else:
        ok = deviation <= (get_settings().tolerance if tol is None else tol)
    return EinsteinCheck(ok, deviation, dev_sq)


# closed forms for Einstein and conformally flat tensors

def h4_conformally_flat(R: CurvatureTensor) -> Scalar:
    """(n-3)/(n-2) [n/(4(n-1)) scal^2 - |cR|^2]; valid when w2 = 0."""
    n = R.n
    _, b, c = curvature_norms(R)
    return quotient((n - 3) * (quotient(n * c, 4 * (n - 1)) - b), n - 2)


def h4_einstein(R: CurvatureTensor) -> Scalar:
    """|R|^2 + (n-4)/(4n) scal^2; valid when w1 = 0."""
    n = R.n
    a, _, c = curvature_norms(R)
    return a + quotient((n - 4) * c, 4 * n)
