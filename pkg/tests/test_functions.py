import json

import numpy as np
import pytest

from hhbounds import functions as fl
from hhbounds.functions import ClassTag
from hhbounds.simplex import make_simplex, random_simplex


def _points(n, m=100, seed=0):
    return np.random.default_rng(seed).uniform(-2, 2, size=(m, n))


def test_strongly_convex_zero_base():
    f = fl.make_strongly_convex(fl.make_zero(), 0.7)
    x = _points(3)
    np.testing.assert_allclose(f(x), 0.7 * np.sum(x**2, axis=1), rtol=1e-15)
    assert f.class_tag is ClassTag.STRONGLY_CONVEX and f.modulus == 0.7


def test_wright_with_zero_linear_part_is_base():
    base = fl.make_exp_linear([0.3, -0.2])
    f = fl.make_wright(np.zeros(2), base)
    x = _points(2)
    np.testing.assert_array_equal(f(x), base(x))
    assert f.class_tag is ClassTag.WRIGHT_CONVEX


def test_concave_control():
    f = fl.make_concave_control(fl.make_norm_power(2))
    assert f([3.0]) == -9.0
    assert f.class_tag is ClassTag.NONCONVEX_CONTROL
    assert not f.class_tag.is_positive


def test_builder_errors():
    with pytest.raises(fl.NotPSD):
        fl.make_quadratic_form([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(fl.NotPSD):
        fl.make_quadratic_form([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(fl.NotPSD):
        fl.make_quadratic_form(-1.0)
    with pytest.raises(fl.InvalidModulus):
        fl.make_strongly_convex(fl.make_zero(), 0.0)
    with pytest.raises(fl.InvalidModulus):
        fl.make_strongly_wright(1.0, fl.make_zero(), -1.0)
    with pytest.raises(ValueError):
        fl.make_norm_power(0.5)
    with pytest.raises(fl.WrongClass):
        fl.make_wright(1.0, fl.make_concave_control(fl.make_norm_power(2)))


def test_psd_boundary_is_accepted():
    # rank-one forms are PSD but not PD
    u = np.array([1.0, 2.0, -1.0])
    f = fl.make_quadratic_form(np.outer(u, u))
    assert f([2.0, -1.0, 0.0]) == pytest.approx(0.0, abs=1e-14)


def test_dimension_checks():
    f = fl.make_affine([1.0, 2.0])
    with pytest.raises(ValueError):
        f([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        fl.make_wright([1.0, 2.0, 3.0], f)


def _all_specs(n, seed=0):
    return fl.full_catalog(n, seed)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_polynomial_forms_match_evaluators(n):
    x = _points(n, seed=n)
    for f in _all_specs(n):
        if f.has_polynomial:
            np.testing.assert_allclose(f.polynomial_form(n)(x), f(x), rtol=1e-10, atol=1e-10)


def test_local_polynomial_of_max_affine():
    f = fl.make_max_affine([([1.0, 0.0], 0.0), ([0.0, 1.0], -10.0)])
    S = make_simplex([[0, 0], [1, 0], [0, 1]])
    p = f.polynomial_on(S)
    assert p is not None
    x = np.random.default_rng(0).dirichlet(np.ones(3), 50) @ S.vertices
    np.testing.assert_allclose(p(x), f(x))
    # both pieces active: no polynomial
    g = fl.make_max_affine([([1.0, 0.0], 0.0), ([0.0, 1.0], 0.0)])
    assert g.polynomial_on(S) is None


def test_local_polynomial_of_odd_norm_power_on_interval():
    f = fl.make_norm_power(3)
    assert f.polynomial_on(make_simplex([[-1.0], [1.0]])) is None
    for a, b in [(-3.0, -1.0), (0.0, 2.0), (-2.0, 0.0)]:
        S = make_simplex([[a], [b]])
        x = np.linspace(a, b, 11)[:, None]
        np.testing.assert_allclose(f.polynomial_on(S)(x), f(x), rtol=1e-14)


def test_wright_parts_recombine():
    for n in (1, 3):
        x = _points(n)
        for f in fl.wright_catalog(n, 4):
            np.testing.assert_array_equal(f(x), x @ f.linear_part + f.convex_part(x))


def test_strong_wright_parts():
    f = fl.make_strongly_wright([1.0, -2.0], fl.make_norm_power(1), 0.5)
    x = _points(2)
    np.testing.assert_allclose(f(x), f.convex_part(x) + 0.5 * np.sum(x**2, axis=1), rtol=1e-14)
    assert f.convex_part.class_tag is ClassTag.WRIGHT_CONVEX


def test_descriptor_round_trip():
    for f in _all_specs(2, 7):
        g = fl.from_descriptor(json.loads(json.dumps(f.descriptor)))
        x = _points(2, 10)
        np.testing.assert_allclose(g(x), f(x), rtol=1e-15)
        assert g.class_tag is f.class_tag and g.modulus == f.modulus


def test_descriptor_errors():
    with pytest.raises(fl.DescriptorError):
        fl.from_descriptor({"class": "nope"})
    with pytest.raises(fl.DescriptorError):
        fl.from_descriptor({"class": "affine", "params": {"bogus": 1}})
    with pytest.raises(fl.DescriptorError):
        fl.from_descriptor([1, 2])


def test_scalar_parameters_broadcast():
    f = fl.from_descriptor({"class": "quadratic_form", "params": {"Q": 2.0, "b": 1.0}})
    assert f.dim is None
    assert f([1.0, 1.0, 1.0]) == pytest.approx(2 * 3 + 3)


def test_midpoint_deficit_linear():
    f = fl.make_affine([1.0, -3.0, 2.0], 4.0)
    assert fl.midpoint_convexity_deficit(f, random_simplex(3, 1), 500, 0) <= 1e-12


def test_midpoint_deficit_strongly_convex_square():
    c = 0.8
    S = random_simplex(2, 3)
    f = fl.make_strongly_convex(fl.make_zero(), c)
    d = fl.midpoint_convexity_deficit(f, S, 400, 5)
    # identity: c|m|^2 - c(|x|^2+|y|^2)/2 = -c|x-y|^2/4, so the max is at the closest pair
    x, y = fl._pairs(S, 400, 5)
    gaps = np.sum((x - y) ** 2, axis=1)
    assert d == pytest.approx(-c * gaps.min() / 4, rel=1e-8)
    assert d < 0


def test_midpoint_deficit_detects_concavity():
    f = fl.make_concave_control(fl.make_norm_power(2))
    d = fl.midpoint_convexity_deficit(f, make_simplex([[0.0], [1.0]]), 1000, 0)
    # the vertex pair (0, 1) gives -1/4 + 1/2 = 1/4
    assert d == pytest.approx(0.25, rel=1e-14)


def test_midpoint_deficit_over_catalogs():
    rng = np.random.default_rng(77)
    for case in range(50):
        n = 1 + case % 5
        S = random_simplex(n, rng)
        for f in fl.convex_catalog(n, case) + fl.strongly_convex_catalog(n, case):
            assert fl.midpoint_convexity_deficit(f, S, 200, case) <= 1e-9


def test_strong_wright_deficit_equality_case():
    c = 1.7
    f = fl.make_strongly_wright(0.0, fl.make_zero(), c)
    d = fl.strong_wright_deficit(f, random_simplex(3, 2), 2000, 0)
    assert abs(d) <= 1e-10


def test_strong_wright_deficit_max_affine_base():
    base = fl.make_max_affine([([1.0, 0.0], 0.0), ([0.0, 1.0], 0.2), ([-1.0, -1.0], 0.1)])
    f = fl.make_strongly_wright([50.0, -20.0], base, 0.3)
    assert fl.strong_wright_deficit(f, random_simplex(2, 8), 10_000, 1) <= 1e-10


def test_strong_wright_deficit_needs_modulus():
    with pytest.raises(fl.WrongClass):
        fl.strong_wright_deficit(fl.make_norm_power(2), random_simplex(2, 0), 10, 0)


def test_catalog_sizes_and_tags():
    for n in (1, 3):
        assert len(fl.convex_catalog(n, 0)) >= 6
        assert all(f.class_tag is ClassTag.CONVEX for f in fl.convex_catalog(n, 0))
        assert all(f.class_tag is ClassTag.WRIGHT_CONVEX for f in fl.wright_catalog(n, 0))
        norms = [np.linalg.norm(f.linear_part) for f in fl.wright_catalog(n, 0)]
        assert max(norms) == pytest.approx(1e3)
        assert all(f.modulus > 0 for f in fl.strongly_wright_catalog(n, 0))
        assert all(not f.class_tag.is_positive for f in fl.control_catalog(n, 0))
