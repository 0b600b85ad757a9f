#!/usr/bin/env python3
"""
p-curvature and sampled h4 positivity checks
============================================

s_p(P) is the double trace of R restricted to the orthogonal complement of
a tangent p-plane P: sum over ordered pairs i != j of R(f_i, f_j; f_i, f_j)
for an orthonormal basis {f_i} of P-perp. s_0 is the scalar curvature and
s_{n-2} twice the sectional curvature of P-perp.

Sampling runs on the float backend; the concluding h4 is always recomputed
exactly from the rational tensor. Sampling only supports "hypothesis
sampled-true"; a hypothesis is "certified" only for constant curvature,
where s_p is known in closed form.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from hwi_curvature import CurvatureTensor, h4, h4_formal, scalar_curv
from hwi_dfcore import Scalar, exact_tree, metric_power, quotient
from hwi_errors import DegreeError, DimensionError, FrameError
from hwi_models import constant_curvature

log = logging.getLogger(__name__)

GRAM_TOLERANCE = 1e-12
PAIR_TOLERANCE = 1e-9
CHUNK_SIZE = 1000

STATUS_CERTIFIED = 'certified'
STATUS_SAMPLED = 'sampled'
STATUS_FAILED = 'not-satisfied'


@dataclass(frozen=True)
class PPlane:
    n: int
    vectors: np.ndarray = field(compare=False)

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=float).reshape(-1, self.n)
        object.__setattr__(self, 'vectors', vectors)
        gram = vectors @ vectors.T
        if not np.allclose(gram, np.eye(len(vectors)), rtol=0.0, atol=GRAM_TOLERANCE):
            raise FrameError('plane vectors are not orthonormal')

    @property
    def p(self) -> int:
        return len(self.vectors)

    @classmethod
    def empty(cls, n: int) -> 'PPlane':
        return cls(n, np.zeros((0, n)))

    @classmethod
    def random(cls, n: int, p: int, rng: np.random.Generator) -> 'PPlane':
        q, _ = np.linalg.qr(rng.standard_normal((n, p)))
        return cls(n, q.T)

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto P-perp."""
        return np.eye(self.n) - self.vectors.T @ self.vectors


@dataclass
class PositivityReport:
    label: str
    n: int
    p: int
    samples: int
    min_sp: float
    status: str
    h4: Scalar
    h4_positive: bool
    counterexample: bool
    closed_form_sp: Optional[Fraction] = None
    argmin_plane: Optional[List[List[float]]] = None

    def as_dict(self) -> Dict:
        return {
            'label': self.label, 'n': self.n, 'p': self.p, 'samples': self.samples,
            'min_sp': self.min_sp, 'status': self.status, 'h4': exact_tree(self.h4),
            'h4_positive': self.h4_positive, 'counterexample': self.counterexample,
            'closed_form_sp': exact_tree(self.closed_form_sp),
        }


def dense_tensor(R: CurvatureTensor) -> np.ndarray:
    """Full float array T[i,j,k,l] = R(e_i, e_j; e_k, e_l)."""
    n = R.n
    t = np.zeros((n, n, n, n))
    for (i, j), (k, l), v in R.form.entries():
        v = float(v)
        t[i, j, k, l] = v
        t[j, i, k, l] = -v
        t[i, j, l, k] = -v
        t[j, i, l, k] = v
    return t


def _check_pair(e: np.ndarray, f: np.ndarray) -> None:
    gram = np.array([[e @ e, e @ f], [f @ e, f @ f]])
    if not np.allclose(gram, np.eye(2), rtol=0.0, atol=PAIR_TOLERANCE):
        raise FrameError('sectional curvature needs an orthonormal pair')


def sectional(R: CurvatureTensor, e, f, tensor: Optional[np.ndarray] = None) -> float:
    e, f = np.asarray(e, dtype=float), np.asarray(f, dtype=float)
    if e.shape != (R.n,) or f.shape != (R.n,):
        raise DimensionError(f'vectors must have length {R.n}')
    _check_pair(e, f)
    t = dense_tensor(R) if tensor is None else tensor
    return float(np.einsum('abcd,a,b,c,d->', t, e, f, e, f))


def complement_basis(plane: PPlane, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Rows form an orthonormal basis of P-perp, randomly rotated when rng is given."""
    n = plane.n
    if plane.p == 0:
        basis = np.eye(n)
    else:
        _, _, vh = np.linalg.svd(plane.vectors)
        basis = vh[plane.p:]
    if rng is not None and len(basis) > 1:
        rotation, _ = np.linalg.qr(rng.standard_normal((len(basis), len(basis))))
        basis = rotation.T @ basis
    return basis


def p_curvature(R: CurvatureTensor, plane: PPlane, basis: Optional[np.ndarray] = None,
                tensor: Optional[np.ndarray] = None) -> float:
    if plane.n != R.n:
        raise DimensionError(f'plane in n={plane.n}, tensor in n={R.n}')
    if plane.p > R.n - 2:
        raise DegreeError(f'p-curvature needs p <= n-2, got p={plane.p}, n={R.n}')
    t = dense_tensor(R) if tensor is None else tensor
    f = complement_basis(plane) if basis is None else np.asarray(basis, dtype=float)
    # i == j terms vanish by antisymmetry
    return float(np.einsum('abcd,ia,jb,ic,jd->', t, f, f, f, f, optimize=True))


def _chunk_min(tensor: np.ndarray, n: int, p: int, count: int,
               seed: np.random.SeedSequence) -> Tuple[float, np.ndarray]:
    rng = np.random.default_rng(seed)
    frames, _ = np.linalg.qr(rng.standard_normal((count, n, p)))
    projectors = np.eye(n)[None, :, :] - frames @ np.swapaxes(frames, 1, 2)
    values = np.einsum('abcd,mac,mbd->m', tensor, projectors, projectors, optimize=True)
    k = int(np.argmin(values))
    return float(values[k]), frames[k].T


def sample_min_sp(R: CurvatureTensor, p: int, samples: int, seed: int = 0,
                  workers: int = 1) -> Tuple[float, np.ndarray]:
    """Minimum of s_p over `samples` Haar-random p-planes (Gaussian frames + QR).

    Chunks get independent child seeds, so the result does not depend on `workers`.
    """
    n = R.n
    if p > n - 2:
        raise DegreeError(f'p-curvature needs p <= n-2, got p={p}, n={n}')
    if samples <= 0:
        raise ValueError('samples must be positive')
    tensor = dense_tensor(R)
    if p == 0:
        return float(scalar_curv(R)), np.zeros((0, n))
    counts = [CHUNK_SIZE] * (samples // CHUNK_SIZE)
    if samples % CHUNK_SIZE:
        counts.append(samples % CHUNK_SIZE)
    seeds = np.random.SeedSequence(seed).spawn(len(counts))
    jobs = list(zip(counts, seeds))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: _chunk_min(tensor, n, p, job[0], job[1]), jobs))
    else:
        results = [_chunk_min(tensor, n, p, c, s) for c, s in jobs]
    return min(results, key=lambda r: r[0])


def positivity_degree(n: int) -> int:
    return (n + 1) // 2


def constant_curvature_lambda(R: CurvatureTensor) -> Optional[Fraction]:
    """lam if R == (lam/2) g^2 exactly, else None."""
    if not R.is_exact() or R.n < 2:
        return None
    n = R.n
    lam = quotient(scalar_curv(R), n * (n - 1))
    if R.form == metric_power(n, 2) * quotient(lam, 2):
        return lam
    return None


def verify_positivity(R: CurvatureTensor, samples: int, rng_seed: int = 0,
                     workers: int = 1) -> PositivityReport:
    """Positive sampled s_p with p = floor((n+1)/2) must come with h4 > 0."""
    n = R.n
    if n < 4:
        raise DimensionError(f'the positivity check needs n >= 4, got {n}')
    p = positivity_degree(n)
    min_sp, argmin = sample_min_sp(R, p, samples, rng_seed, workers)
    lam = constant_curvature_lambda(R)
    closed = None
    if lam is not None:
        closed = closed_form_sp(n, p, lam)
        status = STATUS_CERTIFIED if closed > 0 else STATUS_FAILED
    else:
        status = STATUS_SAMPLED if min_sp > 0 else STATUS_FAILED
    value = h4(R).h4_direct if R.is_exact() else h4_formal(R)
    positive = value > 0
    counterexample = status != STATUS_FAILED and not positive
    if counterexample:
        log.error('positivity counterexample on %s: min s_%d=%g, h4=%s', R.label, p, min_sp, value)
    log.debug('%s: p=%d min s_p=%.6g status=%s h4=%s', R.label, p, min_sp, status, value)
    return PositivityReport(R.label, n, p, samples, min_sp, status, value, positive, counterexample,
                          closed_form_sp=closed, argmin_plane=argmin.tolist())


def find_positive_perturbation(base: CurvatureTensor, direction: CurvatureTensor, samples: int,
                               seed: int = 0, steps: int = 12) -> Fraction:
    """Largest dyadic eps in [0, 1] with sampled min s_p(base + eps*direction) > 0; 0 if none found."""
    p = positivity_degree(base.n)

    def positive(eps: Fraction) -> bool:
        value, _ = sample_min_sp(base + direction.scaled(eps), p, samples, seed)
        return value > 0

    hi = Fraction(1)
    if positive(hi):
        return hi
    lo = Fraction(0)
    for _ in range(steps):
        mid = (lo + hi) / 2
        if positive(mid):
            lo = mid
        else:
            hi = mid
    return lo


def perturbed_sphere(n: int, direction: CurvatureTensor, eps: Fraction) -> CurvatureTensor:
    base = constant_curvature(n, 1)
    return (base + direction.scaled(eps)).relabel(f'sphere:{n}:1+{eps}*{direction.label}')


def closed_form_sp(n: int, p: int, lam: Scalar) -> Scalar:
    """(n-p)(n-p-1) lam for constant curvature lam."""
    return (n - p) * (n - p - 1) * lam

