"""Growth condition, C^k norms and the evaluation-norm estimate."""

import math

import numpy as np
import pytest

from sectionrep.boundary import (
    GrowthSpec,
    SampledSection,
    ck_norm,
    eta_norm,
    eval_norm_chain,
    extends_to_ck,
    section_from_json,
    section_to_json,
)
from sectionrep.errors import GridTooCoarse, OrderViolation, SchemaError
from sectionrep.evalrep import EvalRepSpec, Point
from sectionrep.irrep import CompactElement, build_irrep
from sectionrep.rootdata import build_root_system, kappa_norm
from sectionrep.series import Const, EventuallyZero, Geometric, Power

A1 = build_root_system("A", 1)


def scalar_section(fn, h=1e-3, n=1001):
    xs = h * np.arange(n)
    return SampledSection(grid_step=h, values=fn(xs))


def test_growth_spec_validation():
    with pytest.raises(SchemaError):
        GrowthSpec(-1, Power(1, 2), Const(1))
    with pytest.raises(SchemaError):
        GrowthSpec(0, EventuallyZero((1.0,)), Const(1))  # zero tail distances


def test_extends_to_ck_examples():
    # points at 1/(n+1)^2 with bounded weights: fine for k >= 1, not for k = 0
    assert extends_to_ck(GrowthSpec(1, Power(1, 2), Const(1))).holds
    assert extends_to_ck(GrowthSpec(0, Power(1, 2), Const(1))).fails
    # weights growing like n against distances 1/n at k = 2: harmonic, fails
    assert extends_to_ck(GrowthSpec(2, Power(1, 1), Power(1, -1))).fails
    assert extends_to_ck(GrowthSpec(3, Power(1, 1), Power(1, -1))).holds


def test_extends_monotone_in_k():
    cases = [
        GrowthSpec(0, Power(1, 2), Const(1)),
        GrowthSpec(0, Power(0.5, 1), Power(1, 0.5)),
        GrowthSpec(0, Geometric(0.5, 0.5), Const(2)),
    ]
    for base in cases:
        held = False
        for k in range(6):
            verdict = extends_to_ck(
                GrowthSpec(k, base.distance_rule, base.weight_norm_rule)
            )
            if held:
                assert verdict.holds
            held = held or verdict.holds


def test_extends_bound_certificate():
    verdict = extends_to_ck(GrowthSpec(1, Power(1, 2), Const(1)))
    partial = sum(1.0 * (n ** -2.0) for n in range(1, 10001))
    assert verdict.holds and partial <= verdict.bound + 1e-12


def test_ck_norm_examples():
    zero = scalar_section(lambda x: 0.0 * x)
    assert ck_norm(zero, 1) == 0.0
    linear = scalar_section(lambda x: x)
    assert ck_norm(linear, 1) == pytest.approx(2.0, abs=5e-3)
    quadratic = scalar_section(lambda x: x**2)
    assert ck_norm(quadratic, 1) == pytest.approx(3.0, abs=5e-3)


def test_ck_norm_grid_too_coarse():
    tiny = SampledSection(grid_step=0.5, values=np.array([0.0, 1.0, 0.0]))
    with pytest.raises(GridTooCoarse):
        ck_norm(tiny, 2)


def test_ck_norm_vector_values_match_scalar():
    # coefficients along a unit direction reproduce the scalar computation
    h, n = 1e-3, 1001
    xs = h * np.arange(n)
    direction = CompactElement.torus(A1, (1.0,))
    from sectionrep.irrep import compact_kappa_norm

    unit = direction.scaled(1.0 / compact_kappa_norm(A1, direction, "killing"))
    coeffs = np.outer(xs**2, np.array(unit.cartan + unit.real_root + unit.imag_root))
    vector_section = SampledSection(grid_step=h, values=coeffs, rs=A1)
    scalar = scalar_section(lambda x: x**2)
    assert ck_norm(vector_section, 1) == pytest.approx(ck_norm(scalar, 1), rel=1e-9)


def test_critical_family_bound():
    # sections delta * x^(k + gamma): C^k norms stay under e * (k+1)! * delta
    h = 1e-4
    n = 10001
    xs = h * np.arange(n)
    for k in range(4):
        for gamma in (0.1, 0.5, 0.9):
            section = SampledSection(grid_step=h, values=xs ** (k + gamma))
            assert ck_norm(section, k) <= math.e * math.factorial(k + 1) * 1.05


def test_eval_norm_chain_examples():
    rep = build_irrep(A1, (1,))
    section = scalar_section(lambda x: x**2)
    lhs, rhs = eval_norm_chain(rep, section, 0.5, 1)
    assert lhs <= rhs * (1 + 1e-3)
    expected_rhs = kappa_norm(A1, (1,), "killing") * 0.5 * ck_norm(section, 1)
    assert rhs == pytest.approx(expected_rhs)

    rep3 = build_irrep(A1, (3,))
    _, rhs3 = eval_norm_chain(rep3, section, 0.5, 1)
    assert rhs3 == pytest.approx(3 * rhs)


def test_eval_norm_chain_zero_section():
    rep = build_irrep(A1, (2,))
    section = scalar_section(lambda x: 0.0 * x)
    lhs, rhs = eval_norm_chain(rep, section, 0.25, 1)
    assert lhs == 0.0 and rhs == 0.0


def test_eval_norm_chain_order_violation():
    rep = build_irrep(A1, (1,))
    section = scalar_section(lambda x: x)  # vanishes to order 1 only
    with pytest.raises(OrderViolation):
        eval_norm_chain(rep, section, 0.5, 2)


def test_eval_norm_chain_random_inputs():
    rng = np.random.default_rng(13)
    section = scalar_section(lambda x: x**2)
    for _ in range(30):
        weight = (int(rng.integers(1, 5)),)
        rep = build_irrep(A1, weight)
        x = float(rng.choice([0.2, 0.4, 0.6, 0.8]))
        lhs, rhs = eval_norm_chain(rep, section, x, 1)
        assert lhs <= rhs * (1 + 1e-3)


def test_eta_norm():
    zero = scalar_section(lambda x: 0.0 * x)
    spec1 = EvalRepSpec(A1, ((Point("x", 0.5), (1,)),))
    assert eta_norm(spec1, zero) == 0.0

    # constant coefficient section whose value is the coroot direction iH:
    # on the defining representation its eigenvalues are +-1
    n = 101
    coeffs = np.tile(np.array([1.0, 0.0, 0.0]), (n, 1))
    h_section = SampledSection(grid_step=0.01, values=coeffs, rs=A1)
    val = eta_norm(spec1, h_section)
    assert val == pytest.approx(1.0, abs=1e-9)
    spec2 = EvalRepSpec(A1, ((Point("x", 0.5), (1,)), (Point("y", 0.25), (1,))))
    assert eta_norm(spec2, h_section) == pytest.approx(2 * val, abs=1e-12)

    # scalar section times the default unit direction: |iH|_killing = sqrt(8)
    ones = scalar_section(lambda x: np.ones_like(x))
    assert eta_norm(spec1, ones) == pytest.approx(1.0 / math.sqrt(8.0), abs=1e-9)


def test_section_json_round_trip():
    section = scalar_section(lambda x: x, h=0.1, n=11)
    data = section_to_json(section)
    again = section_from_json(data)
    assert np.allclose(again.values, section.values)
    assert again.grid_step == section.grid_step
