#!/usr/bin/env python3
"""
Double forms on an n-dimensional inner-product space
====================================================

A double form of bidegree (p, q) is stored as a dense table over
C(n,p) x C(n,q) pairs of strictly increasing multi-indices, row-major,
with combination ranking for lookup. Values are exact rationals
(`fractions.Fraction` / int) or binary floats; every operation works on
either backend and never mutates its arguments.

Conventions (see Documents/normalization.md):
- basis frame e_0..e_{n-1} is orthonormal, e_I for I strictly increasing;
- product: (e_I x e_J)(e_K x e_L) = sgn(I,K) sgn(J,L) e_{IuK} x e_{JuL},
  zero on overlap, no factorial normalization;
- inner product: coefficient-wise sum over key pairs;
- star: *(e_I x e_J) = sgn(I,I^c) sgn(J,J^c) e_{I^c} x e_{J^c}.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from hwi_errors import DegreeError, DimensionError

log = logging.getLogger(__name__)

Scalar = Union[Fraction, int, float]
MultiIndex = Tuple[int, ...]


# ---------------------------------------------------------------------------
# scalars

def exact(value) -> Scalar:
    """Coerce to the exact backend unless the value is already a float."""
    if isinstance(value, float):
        return value
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    return Fraction(str(value).strip())


def quotient(value: Scalar, divisor: Scalar) -> Scalar:
    if isinstance(value, float) or isinstance(divisor, float):
        return value / divisor
    return Fraction(value) / Fraction(divisor)


def exact_tree(obj):
    """Lift the plain ints of an exact-backend result (zero sums, integer entries) to Fraction."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, dict):
        return {k: exact_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [exact_tree(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# multi-indices

@lru_cache(maxsize=None)
def basis(n: int, p: int) -> Tuple[MultiIndex, ...]:
    return tuple(itertools.combinations(range(n), p))


@lru_cache(maxsize=None)
def rank_table(n: int, p: int) -> Dict[MultiIndex, int]:
    return {idx: r for r, idx in enumerate(basis(n, p))}


def check_multi_index(n: int, idx: Sequence[int]) -> MultiIndex:
    idx = tuple(int(i) for i in idx)
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise DimensionError(f'multi-index {idx} is not strictly increasing')
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise DimensionError(f'multi-index {idx} out of range for n={n}')
    return idx


def sort_sign(seq: Iterable[int]) -> Tuple[int, MultiIndex]:
    """Sign of the sorting permutation; (0, ()) when an index repeats."""
    items = list(seq)
    if len(set(items)) != len(items):
        return 0, ()
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign, tuple(sorted(items))


def merge_sign(left: MultiIndex, right: MultiIndex) -> int:
    """Parity of the interleaving permutation of two disjoint increasing tuples."""
    inversions = sum(1 for a in left for b in right if a > b)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _merge_table(n: int, p: int, r: int) -> Tuple[Tuple[Optional[Tuple[int, int]], ...], ...]:
    target = rank_table(n, p + r) if p + r <= n else {}
    rows = []
    for left in basis(n, p):
        used = set(left)
        row = []
        for right in basis(n, r):
            if used.intersection(right):
                row.append(None)
                continue
            row.append((target[tuple(sorted(left + right))], merge_sign(left, right)))
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def _removal_table(n: int, p: int) -> Tuple[Dict[int, Tuple[int, int]], ...]:
    # e_j first, then the rest: sign (-1)^(position of j)
    lower = rank_table(n, p - 1)
    table = []
    for idx in basis(n, p):
        row = {}
        for pos, j in enumerate(idx):
            row[j] = (lower[idx[:pos] + idx[pos + 1:]], -1 if pos % 2 else 1)
        table.append(row)
    return tuple(table)


@lru_cache(maxsize=None)
def _complement_table(n: int, p: int) -> Tuple[Tuple[int, int], ...]:
    target = rank_table(n, n - p)
    out = []
    for idx in basis(n, p):
        rest = tuple(i for i in range(n) if i not in idx)
        out.append((target[rest], merge_sign(idx, rest)))
    return tuple(out)


# ---------------------------------------------------------------------------
# the double form value type

@dataclass(frozen=True)
class DoubleForm:
    n: int
    p: int
    q: int
    data: Tuple[Scalar, ...]

    def __post_init__(self):
        if self.n < 0 or self.p < 0 or self.q < 0:
            raise DimensionError(f'negative dimension or degree: n={self.n} p={self.p} q={self.q}')
        expected = math.comb(self.n, self.p) * math.comb(self.n, self.q)
        if len(self.data) != expected:
            raise DimensionError(
                f'table of bidegree ({self.p},{self.q}) in n={self.n} needs {expected} entries, got {len(self.data)}')

    # -- construction ---------------------------------------------------

    @classmethod
    def zero(cls, n: int, p: int, q: int) -> 'DoubleForm':
        return cls(n, p, q, (0,) * (math.comb(n, p) * math.comb(n, q)))

    @classmethod
    def scalar(cls, n: int, value: Scalar) -> 'DoubleForm':
        return cls(n, 0, 0, (value,))

    @classmethod
    def from_entries(cls, n: int, p: int, q: int,
                     entries: Mapping[Tuple[Sequence[int], Sequence[int]], Scalar]) -> 'DoubleForm':
        rows, cols = rank_table(n, p), rank_table(n, q)
        data: List[Scalar] = [0] * (len(rows) * len(cols))
        for (left, right), value in entries.items():
            left, right = check_multi_index(n, left), check_multi_index(n, right)
            if len(left) != p or len(right) != q:
                raise DimensionError(f'key ({left}, {right}) does not have bidegree ({p},{q})')
            data[rows[left] * len(cols) + cols[right]] = value
        return cls(n, p, q, tuple(data))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[Scalar]]) -> 'DoubleForm':
        n = len(matrix)
        if any(len(row) != n for row in matrix):
            raise DimensionError('matrix must be square')
        return cls(n, 1, 1, tuple(v for row in matrix for v in row))

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> 'DoubleForm':
        n = len(values)
        return cls.from_matrix([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def metric(cls, n: int) -> 'DoubleForm':
        return metric_power(n, 1)

    # -- access -----------------------------------------------------------

    @property
    def rows(self) -> int:
        return math.comb(self.n, self.p)

    @property
    def cols(self) -> int:
        return math.comb(self.n, self.q)

    @property
    def bidegree(self) -> Tuple[int, int]:
        return self.p, self.q

    def coeff(self, left: Sequence[int], right: Sequence[int]) -> Scalar:
        left, right = check_multi_index(self.n, left), check_multi_index(self.n, right)
        return self.data[rank_table(self.n, self.p)[left] * self.cols + rank_table(self.n, self.q)[right]]

    def at(self, xs: Sequence[int], ys: Sequence[int]) -> Scalar:
        """Value on frame vectors (e_x1..e_xp ; e_y1..e_yq), any order, repeats allowed."""
        if len(xs) != self.p or len(ys) != self.q:
            raise DegreeError(f'expected {self.p}+{self.q} arguments, got {len(xs)}+{len(ys)}')
        sx, left = sort_sign(xs)
        sy, right = sort_sign(ys)
        if sx == 0 or sy == 0:
            return 0
        return sx * sy * self.coeff(left, right)

    def nonzero(self) -> List[Tuple[int, int, Scalar]]:
        cols = self.cols
        return [(k // cols, k % cols, v) for k, v in enumerate(self.data) if v != 0]

    def entries(self) -> Iterator[Tuple[MultiIndex, MultiIndex, Scalar]]:
        left, right = basis(self.n, self.p), basis(self.n, self.q)
        for r, c, v in self.nonzero():
            yield left[r], right[c], v

    def matrix(self) -> List[List[Scalar]]:
        return [list(self.data[r * self.cols:(r + 1) * self.cols]) for r in range(self.rows)]

    def as_scalar(self) -> Scalar:
        if self.bidegree != (0, 0):
            raise DegreeError(f'bidegree ({self.p},{self.q}) is not a scalar')
        return self.data[0]

    # -- predicates -------------------------------------------------------

    def is_exact(self) -> bool:
        return not any(isinstance(v, float) for v in self.data)

    def is_zero(self, tol: float = 0) -> bool:
        return all(abs(v) <= tol for v in self.data)

    def is_symmetric(self, tol: float = 0) -> bool:
        if self.p != self.q:
            return False
        return (self - self.transpose()).is_zero(tol)

    # -- derived forms ----------------------------------------------------

    def transpose(self) -> 'DoubleForm':
        data = [0] * len(self.data)
        for r, c, v in self.nonzero():
            data[c * self.rows + r] = v
        return DoubleForm(self.n, self.q, self.p, tuple(data))

    def to_float(self) -> 'DoubleForm':
        return DoubleForm(self.n, self.p, self.q, tuple(float(v) for v in self.data))

    def map(self, fn) -> 'DoubleForm':
        return DoubleForm(self.n, self.p, self.q, tuple(fn(v) for v in self.data))

    def _same_shape(self, other: 'DoubleForm') -> None:
        if (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise DimensionError(
                f'shape mismatch: n={self.n} ({self.p},{self.q}) vs n={other.n} ({other.p},{other.q})')

    def __add__(self, other: 'DoubleForm') -> 'DoubleForm':
        if not isinstance(other, DoubleForm):
            return NotImplemented
        self._same_shape(other)
        return DoubleForm(self.n, self.p, self.q, tuple(a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: 'DoubleForm') -> 'DoubleForm':
        if not isinstance(other, DoubleForm):
            return NotImplemented
        self._same_shape(other)
        return DoubleForm(self.n, self.p, self.q, tuple(a - b for a, b in zip(self.data, other.data)))

    def __neg__(self) -> 'DoubleForm':
        return self.map(lambda v: -v)

    def __mul__(self, other):
        if isinstance(other, DoubleForm):
            return product(self, other)
        if isinstance(other, Number):
            return self.map(lambda v: v * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.map(lambda v: other * v)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self.map(lambda v: quotient(v, other))
        return NotImplemented


# ---------------------------------------------------------------------------
# ring operations

def product(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    if a.n != b.n:
        raise DimensionError(f'product of forms in n={a.n} and n={b.n}')
    n, p, q = a.n, a.p + b.p, a.q + b.q
    if p > n or q > n:
        # annihilated degree: the exterior power vanishes
        return DoubleForm.zero(n, p, q)
    left = _merge_table(n, a.p, b.p)
    right = _merge_table(n, a.q, b.q)
    cols = math.comb(n, q)
    out: List[Scalar] = [0] * (math.comb(n, p) * cols)
    b_nz = b.nonzero()
    for ra, ca, va in a.nonzero():
        lrow, rrow = left[ra], right[ca]
        for rb, cb, vb in b_nz:
            lm = lrow[rb]
            if lm is None:
                continue
            rm = rrow[cb]
            if rm is None:
                continue
            k = lm[0] * cols + rm[0]
            if lm[1] * rm[1] > 0:
                out[k] += va * vb
            else:
                out[k] -= va * vb
    return DoubleForm(n, p, q, tuple(out))


def power(a: DoubleForm, k: int) -> DoubleForm:
    if k < 0:
        raise DegreeError('negative power')
    result = DoubleForm.scalar(a.n, 1)
    for _ in range(k):
        result = product(result, a)
    return result


@lru_cache(maxsize=None)
def metric_power(n: int, k: int) -> DoubleForm:
    """g^k; g^0 is the unit scalar."""
    if k == 0:
        return DoubleForm.scalar(n, 1)
    if k == 1:
        return DoubleForm.from_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])
    return product(metric_power(n, k - 1), metric_power(n, 1))


def metric_mult(a: DoubleForm) -> DoubleForm:
    return product(metric_power(a.n, 1), a)


def contract(a: DoubleForm) -> DoubleForm:
    if a.p == 0 or a.q == 0:
        raise DegreeError(f'cannot contract bidegree ({a.p},{a.q})')
    n = a.n
    left = _removal_table(n, a.p)
    right = _removal_table(n, a.q)
    cols = math.comb(n, a.q - 1)
    out: List[Scalar] = [0] * (math.comb(n, a.p - 1) * cols)
    for r, c, v in a.nonzero():
        crow = right[c]
        for j, (rl, sl) in left[r].items():
            hit = crow.get(j)
            if hit is None:
                continue
            k = rl * cols + hit[0]
            if sl * hit[1] > 0:
                out[k] += v
            else:
                out[k] -= v
    return DoubleForm(n, a.p - 1, a.q - 1, tuple(out))


def contract_times(a: DoubleForm, times: int) -> DoubleForm:
    for _ in range(times):
        a = contract(a)
    return a


def hodge_star(a: DoubleForm) -> DoubleForm:
    n = a.n
    left = _complement_table(n, a.p)
    right = _complement_table(n, a.q)
    cols = math.comb(n, n - a.q)
    out: List[Scalar] = [0] * (math.comb(n, n - a.p) * cols)
    for r, c, v in a.nonzero():
        rl, sl = left[r]
        rr, sr = right[c]
        out[rl * cols + rr] = v if sl * sr > 0 else -v
    return DoubleForm(n, n - a.p, n - a.q, tuple(out))


def inner_product(a: DoubleForm, b: DoubleForm) -> Scalar:
    a._same_shape(b)
    return sum((x * y for x, y in zip(a.data, b.data) if x != 0 and y != 0), 0)


def norm_sq(a: DoubleForm) -> Scalar:
    return inner_product(a, a)


def block_embed(a: DoubleForm, n_total: int, offset: int) -> DoubleForm:
    """Re-index a form onto frame vectors offset..offset+n-1 of an n_total frame."""
    if offset < 0 or offset + a.n > n_total:
        raise DimensionError(f'block of size {a.n} at {offset} does not fit in n={n_total}')
    entries = {}
    for left, right, v in a.entries():
        entries[(tuple(i + offset for i in left), tuple(j + offset for j in right))] = v
    return DoubleForm.from_entries(n_total, a.p, a.q, entries)


# ---------------------------------------------------------------------------
# sign laws for mixed bidegrees

def double_star_sign(n: int, p: int, q: int) -> int:
    """** = sign * Id on bidegree (p, q)."""
    return -1 if ((p + q) * (n - p - q)) % 2 else 1


def metric_star_sign(n: int, p: int, q: int) -> int:
    """g w = sign * (*c*w) on bidegree (p, q); +1 whenever p = q."""
    return -1 if ((p + 1) * (n - p) + (q + 1) * (n - q)) % 2 else 1


def star_inner_sign(n: int, p: int, q: int) -> int:
    """*(*a . b) = sign * <a, b> on bidegree (p, q); +1 whenever p = q."""
    return -1 if (p * (n - p) + q * (n - q)) % 2 else 1


# ---------------------------------------------------------------------------
# first Bianchi identity

def _cyclic(a: DoubleForm, x: int, y: int, z: int, w: int) -> Scalar:
    return a.at((x, y), (z, w)) + a.at((y, z), (x, w)) + a.at((z, x), (y, w))


def first_bianchi_defect(a: DoubleForm) -> Scalar:
    if a.bidegree != (2, 2):
        raise DegreeError(f'Bianchi defect needs bidegree (2,2), got ({a.p},{a.q})')
    # the cyclic sum is alternating in x, y, z
    worst: Scalar = 0
    for x, y, z in itertools.combinations(range(a.n), 3):
        for w in range(a.n):
            value = abs(_cyclic(a, x, y, z, w))
            if value > worst:
                worst = value
    return worst


def bianchi_part(a: DoubleForm) -> DoubleForm:
    """Totally antisymmetric component of a symmetric (2,2) form; a - bianchi_part(a) lies in C_1."""
    if a.bidegree != (2, 2):
        raise DegreeError(f'Bianchi part needs bidegree (2,2), got ({a.p},{a.q})')
    entries = {}
    for (x, y), (z, w) in itertools.product(basis(a.n, 2), repeat=2):
        if len({x, y, z, w}) < 4:
            continue
        value = _cyclic(a, x, y, z, w)
        if value != 0:
            entries[((x, y), (z, w))] = quotient(value, 3)
    return DoubleForm.from_entries(a.n, 2, 2, entries)
