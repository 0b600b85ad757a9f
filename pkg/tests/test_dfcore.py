"""Tests for the double form ring: product, contraction, star, inner product and Bianchi checks."""

from fractions import Fraction

import numpy as np
import pytest

from hwi_dfcore import (DoubleForm, basis, bianchi_part, check_multi_index, contract, double_star_sign,
                        exact_tree, first_bianchi_defect, hodge_star, inner_product, merge_sign, metric_mult,
                        metric_power, metric_star_sign, norm_sq, power, product, sort_sign,
                        star_inner_sign)
from hwi_errors import DegreeError, DimensionError
from hwi_models import random_double_form, random_symmetric


### Fixtures


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pair_form(n: int) -> DoubleForm:
    """e01 x e23 + e23 x e01: slot-symmetric but violating the first Bianchi identity."""
    return DoubleForm.from_entries(n, 2, 2, {((0, 1), (2, 3)): 1, ((2, 3), (0, 1)): 1})


### Multi-indices and signs


def test_basis_is_lexicographic():
    assert basis(4, 2) == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def test_sort_sign():
    assert sort_sign([2, 0, 1]) == (1, (0, 1, 2))
    assert sort_sign([1, 0]) == (-1, (0, 1))
    assert sort_sign([1, 1]) == (0, ())


def test_merge_sign():
    assert merge_sign((0,), (1,)) == 1
    assert merge_sign((1,), (0,)) == -1
    assert merge_sign((0, 2), (1, 3)) == -1


@pytest.mark.parametrize("idx", [(1, 0), (0, 0), (0, 5)])
def test_check_multi_index_rejects(idx):
    with pytest.raises(DimensionError):
        check_multi_index(4, idx)


def test_table_length_is_checked():
    with pytest.raises(DimensionError):
        DoubleForm(4, 1, 1, (0,) * 15)


### Product


def test_metric_square_at_unit_pair():
    assert metric_power(4, 2).coeff((1, 2), (1, 2)) == 2


def test_product_with_zero(rng):
    a = random_double_form(4, 1, 2, rng)
    assert product(a, DoubleForm.zero(4, 1, 1)).is_zero()


def test_half_metric_square_is_unit_sphere():
    R = metric_power(4, 2) * Fraction(1, 2)
    assert R.coeff((1, 2), (1, 2)) == 1
    assert R.at((2, 1), (1, 2)) == -1


def test_product_overflow_is_zero_form():
    out = product(metric_power(3, 2), metric_power(3, 2))
    assert out.bidegree == (4, 4)
    assert out.is_zero()


def test_power_matches_metric_power():
    g = metric_power(5, 1)
    assert power(g, 3) == metric_power(5, 3)
    assert power(g, 0) == DoubleForm.scalar(5, 1)


def test_product_dimension_mismatch():
    with pytest.raises(DimensionError):
        product(metric_power(3, 1), metric_power(4, 1))


@pytest.mark.parametrize("seed", range(5))
def test_associativity(seed):
    rng = np.random.default_rng(seed)
    x = random_double_form(5, 1, 0, rng)
    y = random_double_form(5, 1, 2, rng)
    z = random_double_form(5, 2, 1, rng)
    assert product(product(x, y), z) == product(x, product(y, z))


@pytest.mark.parametrize("seed", range(5))
def test_symmetric_ring_is_commutative(seed):
    rng = np.random.default_rng(seed)
    h = random_symmetric(5, rng)
    k = random_double_form(5, 2, 2, rng)
    k = k + k.transpose()
    assert product(h, k) == product(k, h)


### Contraction and metric multiplication


def test_contract_metric_is_dimension():
    assert contract(metric_power(5, 1)).as_scalar() == 5


def test_contract_metric_square():
    assert contract(metric_power(4, 2)) == metric_power(4, 1) * 6


def test_double_contraction_of_unit_sphere():
    assert contract(contract(metric_power(4, 2) * Fraction(1, 2))).as_scalar() == 12


@pytest.mark.parametrize("n", [3, 4, 5])
def test_contract_metric_powers(n):
    for k in range(1, n + 1):
        assert contract(metric_power(n, k)) == metric_power(n, k - 1) * (k * (n - k + 1))


def test_contract_scalar_raises():
    with pytest.raises(DegreeError):
        contract(DoubleForm.scalar(4, 1))


def test_metric_mult():
    one = DoubleForm.scalar(4, 1)
    assert metric_mult(one) == metric_power(4, 1)
    assert metric_mult(metric_power(4, 1)) == metric_power(4, 2)
    half = DoubleForm.scalar(4, Fraction(1, 2))
    assert metric_mult(metric_mult(half)) == metric_power(4, 2) * Fraction(1, 2)


### Hodge star


def test_double_star_on_11_forms_in_dim_4(rng):
    a = random_double_form(4, 1, 1, rng)
    assert double_star_sign(4, 1, 1) == 1
    assert hodge_star(hodge_star(a)) == a


def test_star_of_top_form_is_scalar():
    top = DoubleForm.from_entries(3, 3, 3, {((0, 1, 2), (0, 1, 2)): 5})
    assert hodge_star(top) == DoubleForm.scalar(3, 5)


@pytest.mark.parametrize("n,p,q", [(3, 1, 0), (3, 2, 1), (3, 1, 1), (4, 2, 1), (5, 2, 3), (6, 3, 3)])
def test_double_star_sign_law(n, p, q):
    a = random_double_form(n, p, q, np.random.default_rng(n * 100 + p * 10 + q))
    assert hodge_star(hodge_star(a)) == a * double_star_sign(n, p, q)


def test_metric_star_signs():
    assert metric_star_sign(2, 1, 0) == 1
    assert metric_star_sign(3, 1, 0) == -1
    assert metric_star_sign(3, 2, 1) == -1
    for n in range(2, 7):
        for p in range(n):
            assert metric_star_sign(n, p, p) == 1
            assert star_inner_sign(n, p, p) == 1


@pytest.mark.parametrize("n,p,q", [(3, 0, 0), (3, 1, 1), (3, 1, 0), (3, 2, 1), (4, 1, 2), (5, 2, 2), (6, 1, 3)])
def test_metric_product_is_star_contract_star(n, p, q):
    a = random_double_form(n, p, q, np.random.default_rng(7 + n + p + q))
    g = metric_power(n, 1)
    assert product(g, a) == hodge_star(contract(hodge_star(a))) * metric_star_sign(n, p, q)


### Inner product


def test_norm_of_metric_square():
    assert norm_sq(metric_power(4, 2)) == 24


def test_inner_with_zero(rng):
    a = random_double_form(4, 2, 1, rng)
    assert inner_product(a, DoubleForm.zero(4, 2, 1)) == 0


def test_exact_tree_lifts_zero_sums(rng):
    zero = inner_product(random_double_form(4, 2, 1, rng), DoubleForm.zero(4, 2, 1))
    lifted = exact_tree({'norm': zero, 'rows': [[1, Fraction(1, 2)], (0, 2.5)], 'ok': True})
    assert lifted == {'norm': Fraction(0), 'rows': [[Fraction(1), Fraction(1, 2)], [Fraction(0), 2.5]], 'ok': True}
    assert isinstance(lifted['norm'], Fraction)
    assert lifted['ok'] is True
    assert exact_tree(None) is None


def test_inner_shape_mismatch():
    with pytest.raises(DimensionError):
        inner_product(metric_power(4, 1), metric_power(4, 2))


@pytest.mark.parametrize("n,p,q", [(3, 1, 1), (4, 1, 2), (4, 2, 2), (5, 2, 1)])
def test_contraction_is_adjoint_of_metric_product(n, p, q):
    rng = np.random.default_rng(n + 10 * p + 100 * q)
    a = random_double_form(n, p, q, rng)
    b = random_double_form(n, p + 1, q + 1, rng)
    assert inner_product(product(metric_power(n, 1), a), b) == inner_product(a, contract(b))


@pytest.mark.parametrize("n,p,q", [(3, 1, 2), (4, 2, 2), (5, 1, 2), (5, 3, 2)])
def test_inner_product_through_star(n, p, q):
    rng = np.random.default_rng(n * p + q)
    a = random_double_form(n, p, q, rng)
    b = random_double_form(n, p, q, rng)
    value = inner_product(a, b)
    assert hodge_star(product(a, hodge_star(b))).as_scalar() == value
    assert hodge_star(product(hodge_star(a), b)).as_scalar() == value * star_inner_sign(n, p, q)


### First Bianchi identity


def test_metric_square_satisfies_bianchi():
    assert first_bianchi_defect(metric_power(5, 2)) == 0


@pytest.mark.parametrize("seed", range(4))
def test_square_of_symmetric_form_satisfies_bianchi(seed):
    h = random_symmetric(5, np.random.default_rng(seed))
    assert first_bianchi_defect(product(h, h)) == 0


def test_bianchi_part_of_pair_form():
    a = pair_form(4)
    b = bianchi_part(a)
    assert first_bianchi_defect(a) == 1
    assert first_bianchi_defect(b) == 1
    assert b.coeff((0, 1), (2, 3)) == Fraction(1, 3)
    assert b.coeff((0, 2), (1, 3)) == Fraction(-1, 3)
    assert first_bianchi_defect(a - b) == 0


def test_bianchi_defect_needs_22():
    with pytest.raises(DegreeError):
        first_bianchi_defect(metric_power(4, 1))


### Float backend


def test_float_backend_product():
    g = metric_power(4, 1).to_float()
    gg = product(g, g)
    assert not gg.is_exact()
    assert gg.coeff((0, 3), (0, 3)) == pytest.approx(2.0)
    assert norm_sq(gg) == pytest.approx(24.0)
