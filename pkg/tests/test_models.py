"""Model generators against the closed-form h_2q oracles."""

from fractions import Fraction

import numpy as np
import pytest

from hwi_curvature import einstein_check, h2q, h4, h4_formal, scalar_curv
from hwi_dfcore import first_bianchi_defect, metric_power
from hwi_errors import ModelError
from hwi_models import (conformally_flat, conformally_flat_form, conformally_flat_h2q, constant_curvature,
                        constant_curvature_h2q, einsteinize, elementary_symmetric, flat, hypersurface,
                        hypersurface_h2q, parse_values, product_h2q, product_h4, product_tensor,
                        random_bianchi, random_symmetric, scale_metric, with_circle)


### Constant curvature


def test_constant_curvature_values():
    assert h4(constant_curvature(4, 1)).h4 == 6
    assert constant_curvature(5, 0).form.is_zero()
    assert h4(constant_curvature(6, 2)).h4 == 360


@pytest.mark.parametrize("n", [4, 5, 6])
@pytest.mark.parametrize("lam", [Fraction(-2), Fraction(1, 2), Fraction(3)])
def test_constant_curvature_oracle(n, lam):
    R = constant_curvature(n, lam)
    for q in range(1, n // 2 + 1):
        assert h2q(R, q) == constant_curvature_h2q(n, lam, q)


### Products


def test_sphere_product():
    sphere = constant_curvature(4, 1)
    R = product_tensor(sphere, sphere)
    assert R.n == 8
    assert h4(R, orders=[2]).h4 == 84
    assert product_h4(sphere, sphere) == 84


def test_product_with_flat_line_keeps_h4():
    R = random_bianchi(4, 2)
    assert h4_formal(product_tensor(R, flat(1))) == h4_formal(R)


def test_circle_device_on_odd_sphere():
    R = with_circle(constant_curvature(5, 1))
    assert R.n == 6
    assert h4(R).h4 == 30


@pytest.mark.parametrize("n1,n2,seed", [(2, 3, 0), (3, 3, 1), (2, 4, 2)])
def test_product_binomial_law(n1, n2, seed):
    rng = np.random.default_rng(seed)
    first, second = random_bianchi(n1, rng), random_bianchi(n2, rng)
    R = product_tensor(first, second)
    for q in range(1, R.n // 2 + 1):
        assert h2q(R, q, check=False) == product_h2q(first, second, q)
    assert h4_formal(R) == product_h4(first, second)


### Hypersurfaces


def test_unit_sphere_as_hypersurface():
    assert hypersurface([1, 1, 1, 1]).form == constant_curvature(4, 1).form


def test_hypersurface_values():
    R = hypersurface([1, 2, 3, 4])
    assert h4(R).h4 == 144
    assert scalar_curv(R) == 70
    assert hypersurface([0, 0, 0, 0]).form.is_zero()


@pytest.mark.parametrize("eigs", [[1, -2, 3, 0, 2], [Fraction(1, 2), 1, -1, 2, 3, -3]])
def test_hypersurface_oracle(eigs):
    R = hypersurface(eigs)
    for q in range(1, len(eigs) // 2 + 1):
        assert h2q(R, q) == hypersurface_h2q(eigs, q)


### Conformally flat


def test_conformal_identity_is_constant_curvature_two():
    R = conformally_flat([1, 1, 1, 1])
    assert R.form == metric_power(4, 2)
    assert h4(R).h4 == 24 == constant_curvature_h2q(4, 2, 2)


def test_conformal_indefinite():
    R = conformally_flat([1, 1, -1, -1])
    assert scalar_curv(R) == 0
    assert h4(R).h4 == -8
    assert conformally_flat([0, 0, 0, 0]).form.is_zero()


@pytest.mark.parametrize("hs", [[1, 2, -1, 0, 3], [2, -1, 1, 1, -3, 0]])
def test_conformal_oracle(hs):
    R = conformally_flat(hs)
    for q in range(1, len(hs) // 2 + 1):
        assert h2q(R, q) == conformally_flat_h2q(hs, q)


def test_conformally_flat_form_needs_11_input():
    h = random_symmetric(4, 0)
    with pytest.raises(ModelError):
        conformally_flat_form(metric_power(4, 2))
    assert first_bianchi_defect(conformally_flat_form(h).form) == 0


### Scaling


def test_scale_metric_law():
    sphere = constant_curvature(4, 1)
    assert h4(scale_metric(sphere, 4)).h4 == Fraction(6, 16)
    assert scale_metric(sphere, 1).form == sphere.form
    assert scale_metric(scale_metric(sphere, Fraction(1, 4)), 4).form == sphere.form


@pytest.mark.parametrize("t", [Fraction(2), Fraction(1, 3)])
def test_scale_metric_all_orders(t):
    R = random_bianchi(6, 4)
    scaled = scale_metric(R, t)
    for q in (1, 2, 3):
        assert h2q(scaled, q, check=False) == h2q(R, q, check=False) / t ** q


@pytest.mark.parametrize("t", [0, -1])
def test_scale_metric_rejects_nonpositive(t):
    with pytest.raises(ModelError):
        scale_metric(constant_curvature(4, 1), t)


### Random tensors and Einstein-ization


def test_random_bianchi_reproducible():
    assert random_bianchi(5, 42).form == random_bianchi(5, 42).form
    assert random_bianchi(5, 42).form != random_bianchi(5, 43).form


@pytest.mark.parametrize("seed", range(5))
def test_random_bianchi_satisfies_bianchi(seed):
    assert first_bianchi_defect(random_bianchi(5, seed).form) == 0


def test_random_symmetric_traceless():
    h = random_symmetric(5, 1, traceless=True)
    assert h.is_symmetric()
    assert sum(h.coeff((i,), (i,)) for i in range(5)) == 0


def test_einsteinize():
    R = hypersurface([1, 2, 3, 4])
    E = einsteinize(R)
    assert einstein_check(E).is_einstein
    assert h4_formal(E) >= 0
    assert scalar_curv(E) == scalar_curv(R)
    assert einsteinize(E).form == E.form
    sphere = constant_curvature(4, 1)
    assert einsteinize(sphere).form == sphere.form


### Oracles and parsing


def test_elementary_symmetric():
    assert elementary_symmetric([1, 2, 3, 4], 2) == 35
    assert elementary_symmetric([1, 2, 3, 4], 4) == 24
    assert elementary_symmetric([1, 2], 0) == 1
    assert elementary_symmetric([1, 2], 3) == 0


def test_parse_values():
    assert parse_values('1,2,1/2') == [1, 2, Fraction(1, 2)]
    with pytest.raises(ModelError):
        parse_values('1,x')
