#!/usr/bin/env python3
"""
Model curvature tensors and closed-form oracles
===============================================

Generators for constant curvature, Riemannian products, Euclidean
hypersurfaces, conformally flat tensors, metric scaling, random Bianchi
tensors and Einstein-ization, together with the closed-form h_2q values
each model class is known to have.
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import List, Sequence, Union

import numpy as np

from hwi_curvature import CurvatureTensor, decompose, h2q, h4_formal, scalar_curv
from hwi_dfcore import DoubleForm, Scalar, block_embed, exact, metric_power, product, quotient
from hwi_errors import ModelError

log = logging.getLogger(__name__)

SeedLike = Union[int, np.random.Generator, None]

# entries of random symmetric forms are drawn from [-ENTRY_RANGE, ENTRY_RANGE]
ENTRY_RANGE = 3


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# generators

def flat(n: int) -> CurvatureTensor:
    return CurvatureTensor(DoubleForm.zero(n, 2, 2), label=f'flat:{n}', validate=False)


def constant_curvature(n: int, lam) -> CurvatureTensor:
    """R = (lam/2) g^2."""
    if n < 2:
        raise ModelError(f'constant curvature needs n >= 2, got {n}')
    lam = exact(lam)
    return CurvatureTensor(metric_power(n, 2) * quotient(lam, 2), label=f'sphere:{n}:{lam}', validate=False)


def product_tensor(first: CurvatureTensor, second: CurvatureTensor) -> CurvatureTensor:
    """R1 + R2 on the direct-sum frame; cross-block coefficients vanish."""
    n = first.n + second.n
    form = block_embed(first.form, n, 0) + block_embed(second.form, n, first.n)
    return CurvatureTensor(form, label=f'{first.label}x{second.label}', validate=False)


def hypersurface(eigenvalues: Sequence) -> CurvatureTensor:
    """Gauss equation R = B^2 / 2 for a diagonal second fundamental form B."""
    if len(eigenvalues) < 2:
        raise ModelError('hypersurface needs n >= 2 principal curvatures')
    b = DoubleForm.diagonal([exact(v) for v in eigenvalues])
    label = 'hypersurface:' + ','.join(str(exact(v)) for v in eigenvalues)
    return CurvatureTensor(product(b, b) / 2, label=label, validate=False)


def conformally_flat(h_eigenvalues: Sequence) -> CurvatureTensor:
    """R = g.h with h diagonal."""
    h = DoubleForm.diagonal([exact(v) for v in h_eigenvalues])
    label = 'conformal:' + ','.join(str(exact(v)) for v in h_eigenvalues)
    return conformally_flat_form(h, label)


def conformally_flat_form(h: DoubleForm, label: str = 'conformal') -> CurvatureTensor:
    if h.bidegree != (1, 1) or not h.is_symmetric():
        raise ModelError('conformally flat tensors need a symmetric (1,1) form h')
    return CurvatureTensor(product(metric_power(h.n, 1), h), label=label, validate=False)


def scale_metric(R: CurvatureTensor, t) -> CurvatureTensor:
    """Curvature of g_t = t g, in a g_t-orthonormal frame (e -> e/sqrt(t)): components R/t."""
    t = exact(t)
    if t <= 0:
        raise ModelError(f'metric scale must be positive, got {t}')
    return CurvatureTensor(R.form / t, label=f'{R.label}@{t}', validate=False)


def random_symmetric(n: int, seed: SeedLike = None, traceless: bool = False,
                     entry_range: int = ENTRY_RANGE) -> DoubleForm:
    rng = _rng(seed)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = Fraction(int(rng.integers(-entry_range, entry_range + 1)))
            m[i][j] = m[j][i] = v
    if traceless:
        shift = sum(m[i][i] for i in range(n)) / n
        for i in range(n):
            m[i][i] -= shift
    return DoubleForm.from_matrix(m)


def random_double_form(n: int, p: int, q: int, seed: SeedLike = None,
                       entry_range: int = ENTRY_RANGE, density: float = 1.0) -> DoubleForm:
    """Random rational (p, q) form; small denominators keep exact arithmetic cheap."""
    rng = _rng(seed)
    size = math.comb(n, p) * math.comb(n, q)
    data = []
    for _ in range(size):
        if density < 1.0 and rng.random() > density:
            data.append(0)
            continue
        num = int(rng.integers(-entry_range, entry_range + 1))
        den = int(rng.integers(1, 3))
        data.append(Fraction(num, den))
    return DoubleForm(n, p, q, tuple(data))


def random_bianchi(n: int, seed: SeedLike = None, terms: int = 3) -> CurvatureTensor:
    """sum_i c_i h_i.h_i over random symmetric h_i; c_i = +-1/d, d in {1, 2, 3}."""
    if n < 2:
        raise ModelError(f'random curvature tensors need n >= 2, got {n}')
    rng = _rng(seed)
    form = DoubleForm.zero(n, 2, 2)
    for _ in range(terms):
        h = random_symmetric(n, rng)
        sign = 1 if rng.integers(0, 2) else -1
        coefficient = Fraction(sign, int(rng.integers(1, 4)))
        form = form + product(h, h) * coefficient
    label = f'random:{n}:{seed}' if isinstance(seed, int) else f'random:{n}'
    return CurvatureTensor(form, label=label, validate=False)


def einsteinize(R: CurvatureTensor) -> CurvatureTensor:
    """R - g.w1: drops the traceless Ricci part, keeps w0 and w2."""
    parts = decompose(R)
    form = R.form - product(metric_power(R.n, 1), parts.omega1)
    return CurvatureTensor(form, label=f'einstein({R.label})', validate=False)


def with_circle(R: CurvatureTensor) -> CurvatureTensor:
    """R x flat line; raises the dimension by one without changing any h_2q."""
    return product_tensor(R, flat(1)).relabel(f'{R.label}xS1')


# ---------------------------------------------------------------------------
# closed-form oracles

def elementary_symmetric(values: Sequence[Scalar], k: int) -> Scalar:
    if k < 0 or k > len(values):
        return 0
    return sum((math.prod(c) for c in itertools.combinations(values, k)), Fraction(0))


def constant_curvature_h2q(n: int, lam, q: int) -> Scalar:
    """lam^q n! / (2^q (n-2q)!)."""
    lam = exact(lam)
    return lam ** q * Fraction(math.factorial(n), 2 ** q * math.factorial(n - 2 * q))


def hypersurface_h2q(eigenvalues: Sequence, q: int) -> Scalar:
    """(2q)!/2^q sigma_2q(eigenvalues)."""
    values = [exact(v) for v in eigenvalues]
    return Fraction(math.factorial(2 * q), 2 ** q) * elementary_symmetric(values, 2 * q)


def conformally_flat_h2q(h_eigenvalues: Sequence, q: int) -> Scalar:
    """(n-q)! q! / (n-2q)! sigma_q(h)."""
    values = [exact(v) for v in h_eigenvalues]
    n = len(values)
    return Fraction(math.factorial(n - q) * math.factorial(q), math.factorial(n - 2 * q)) \
        * elementary_symmetric(values, q)


def product_h2q(first: CurvatureTensor, second: CurvatureTensor, q: int) -> Scalar:
    """sum_i C(q,i) h_2i(R1) h_2q-2i(R2); terms with 2i > n1 or 2(q-i) > n2 vanish."""
    total: Scalar = 0
    for i in range(q + 1):
        if 2 * i > first.n or 2 * (q - i) > second.n:
            continue
        total += math.comb(q, i) * h2q(first, i) * h2q(second, q - i)
    return total


def product_h4(first: CurvatureTensor, second: CurvatureTensor) -> Scalar:
    """h4_1 + scal_1 scal_2 / 2 + h4_2."""
    return h4_formal(first) + quotient(scalar_curv(first) * scalar_curv(second), 2) + h4_formal(second)


def parse_values(text: str) -> List[Scalar]:
    try:
        return [exact(v) for v in text.split(',') if v.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise ModelError(f'cannot parse value list {text!r}: {e}') from e
