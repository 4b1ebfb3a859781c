"""Tests for parity-split polynomials: evaluation, JSON, tensors, fitting."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from nbar.quasipoly import (
    QuasiPolynomial,
    qp_fit,
    qp_from_json,
    qp_from_xi_tensor,
    qp_parse,
    qp_serialize,
    qp_to_json,
    qp_to_xi_tensor,
)

F = Fraction


def sample_qp() -> QuasiPolynomial:
    # f(b1, b2) =  (b1² + b2²)/4 + 1   if both even
    #              3·b_odd²            if exactly one odd
    #              5                   if both odd
    return QuasiPolynomial(
        0,
        2,
        {
            0: {(1, 0): F(1, 4), (0, 1): F(1, 4), (0, 0): F(1)},
            1: {(1, 0): F(3)},
            2: {(0, 0): F(5)},
        },
    )


def test_evaluate_by_parity():
    qp = sample_qp()
    assert qp.evaluate((2, 4)) == 6
    assert qp.evaluate((3, 2)) == 27
    assert qp.evaluate((1, 1)) == 5
    assert qp.evaluate((0, 0)) == 1


def test_evaluate_is_order_invariant():
    qp = sample_qp()
    for b in [(2, 4), (3, 2), (5, 0), (1, 3), (2, 2)]:
        assert qp.evaluate(b) == qp.evaluate(b[::-1])


def test_evaluate_wrong_arity():
    with pytest.raises(ValueError):
        sample_qp().evaluate((1, 2, 3))


def test_constructor_drops_zero_terms():
    qp = QuasiPolynomial(0, 2, {0: {(1, 0): F(0)}, 1: {}})
    assert qp.classes == {}
    assert qp.is_zero


def test_constructor_validates_keys():
    with pytest.raises(ValueError):
        QuasiPolynomial(0, 2, {3: {(0, 0): F(1)}})
    with pytest.raises(ValueError):
        QuasiPolynomial(0, 2, {0: {(0, 0, 0): F(1)}})


def test_coefficient_lookup():
    qp = sample_qp()
    assert qp.coefficient(0, (1, 0)) == F(1, 4)
    assert qp.coefficient(1, (1, 0)) == 3
    assert qp.coefficient(1, (0, 1)) == 0
    assert qp.coefficient(2, (0, 0)) == 5


def test_subtraction_and_scale():
    qp = sample_qp()
    assert (qp - qp).is_zero
    doubled = qp.scale(2)
    for b in [(2, 4), (3, 2), (1, 1)]:
        assert doubled.evaluate(b) == 2 * qp.evaluate(b)
    assert qp.scale(0).is_zero


def test_pin_even_matches_evaluation():
    qp = sample_qp()
    pinned = qp.pin_even(2)
    assert pinned.n == 1
    for v in (0, 2, 4, 1, 3, 5):
        assert pinned.evaluate((v,)) == qp.evaluate((v, 2))
    with pytest.raises(ValueError):
        qp.pin_even(3)


def test_pin_odd_matches_evaluation():
    qp = sample_qp()
    pinned = qp.pin_odd(3)
    assert pinned.n == 1
    for v in (0, 2, 4, 1, 3, 5):
        assert pinned.evaluate((v,)) == qp.evaluate((v, 3))
    with pytest.raises(ValueError):
        qp.pin_odd(2)


def test_serialize_round_trip():
    qp = sample_qp()
    data = qp_serialize(qp)
    assert data["g"] == 0 and data["n"] == 2
    assert qp_parse(data) == qp
    assert qp_from_json(qp_to_json(qp)) == qp
    # serialized form is valid JSON with string coefficients
    blob = json.loads(qp_to_json(qp))
    coeffs = [t["coeff"] for cls in blob["classes"] for t in cls["terms"]]
    assert all(isinstance(c, str) for c in coeffs)
    assert "1/4" in coeffs


def test_parse_diagnostics_name_the_position():
    good = qp_serialize(sample_qp())

    with pytest.raises(ValueError, match=r"\$: expected object"):
        qp_parse([1, 2])
    with pytest.raises(ValueError, match=r"\$: missing field 'classes'"):
        qp_parse({"g": 0, "n": 2})
    with pytest.raises(ValueError, match=r"\$\.n"):
        qp_parse({"g": 0, "n": 0, "classes": []})

    bad = json.loads(json.dumps(good))
    bad["classes"][0]["terms"][0]["coeff"] = "pi"
    with pytest.raises(ValueError, match=r"\$\.classes\[0\]\.terms\[0\]\.coeff"):
        qp_parse(bad)

    bad = json.loads(json.dumps(good))
    bad["classes"][0]["terms"][0]["exponents"] = [1]
    with pytest.raises(ValueError, match=r"exponents"):
        qp_parse(bad)

    bad = json.loads(json.dumps(good))
    bad["classes"].append(dict(bad["classes"][0]))
    with pytest.raises(ValueError, match="duplicate class"):
        qp_parse(bad)


def test_parse_rejects_division_by_zero_coeff():
    data = qp_serialize(sample_qp())
    data["classes"][0]["terms"][0]["coeff"] = "1/0"
    with pytest.raises(ValueError, match="not a rational"):
        qp_parse(data)


def test_xi_tensor_round_trip():
    qp = sample_qp()
    tensor = qp_to_xi_tensor(qp)
    # fully slot-expanded: the k=0 class contributes its key in both slot orders
    assert tensor[((0, 1), (0, 0))] == F(1, 4)
    assert tensor[((0, 0), (0, 1))] == F(1, 4)
    assert tensor[((1, 1), (0, 0))] == 3
    assert tensor[((0, 0), (1, 1))] == 3
    assert qp_from_xi_tensor(0, 2, tensor) == qp


def test_xi_tensor_rejects_asymmetry():
    with pytest.raises(ValueError, match="not slot-symmetric"):
        qp_from_xi_tensor(0, 2, {((1, 1), (0, 0)): F(1)})
    with pytest.raises(ValueError, match="not slot-symmetric"):
        qp_from_xi_tensor(0, 2, {((0, 1), (0, 0)): F(1), ((0, 0), (0, 1)): F(2)})
    with pytest.raises(ValueError, match="wrong arity"):
        qp_from_xi_tensor(0, 3, {((0, 0), (0, 0)): F(1)})


def test_fit_recovers_known_polynomial():
    def func(b):
        odd = sum(1 for v in b if v % 2)
        s = sum(v * v for v in b)
        return Fraction(s * s + odd)

    qp = qp_fit(func, 0, 2, degree=2)
    want = QuasiPolynomial(
        0,
        2,
        {
            0: {(2, 0): F(1), (1, 1): F(2), (0, 2): F(1)},
            1: {(2, 0): F(1), (1, 1): F(2), (0, 2): F(1), (0, 0): F(1)},
            2: {(2, 0): F(1), (1, 1): F(2), (0, 2): F(1), (0, 0): F(2)},
        },
    )
    assert qp == want


def test_fit_drops_identically_zero_classes():
    def func(b):
        odd = sum(1 for v in b if v % 2)
        return Fraction(sum(v * v for v in b)) if odd == 0 else Fraction(0)

    qp = qp_fit(func, 0, 2, degree=1)
    assert set(qp.classes) == {0}


def test_fit_restricted_to_one_class():
    def func(b):
        return Fraction(sum(v * v for v in b))

    qp = qp_fit(func, 0, 2, odd_counts=(1,), degree=1)
    assert set(qp.classes) == {1}
    assert qp.evaluate((3, 2)) == 13


def test_fit_detects_wrong_degree_bound():
    def func(b):
        return Fraction(sum(v ** 4 for v in b))

    with pytest.raises(ValueError, match="verification"):
        qp_fit(func, 0, 2, degree=1)


def test_fit_rejects_negative_degree():
    with pytest.raises(ValueError):
        qp_fit(lambda b: Fraction(1), 0, 2)
