"""Polynomial arithmetic, evaluation laws and decision normalization."""
from fractions import Fraction
from random import Random

import pytest

from polymdp.poly import (
    ConstantComparisonError,
    IneqDec,
    Polynomial,
    normalize_cmp,
    normalize_ineq,
)

X1 = Polynomial.var("x1")
X2 = Polynomial.var("x2")
K = Polynomial.var("k")


def c(v) -> Polynomial:
    return Polynomial.const(Fraction(v))


def rand_poly(rng: Random, syms=("x1", "x2", "k"), max_terms=4, max_deg=3) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = []
        for sym in syms:
            e = rng.randint(0, max_deg)
            if e:
                mono.append((sym, e))
        coeff = Fraction(rng.randint(-20, 20), rng.randint(1, 10))
        terms[tuple(sorted(mono))] = terms.get(tuple(sorted(mono)), 0) + coeff
    return Polynomial(terms)


def rand_point(rng: Random, syms=("x1", "x2", "k")):
    return {s: Fraction(rng.randint(-50, 50), rng.randint(1, 10)) for s in syms}


class TestArithmetic:
    def test_like_term_merge(self):
        assert (X1 + X2) + X1 == X1.scale(2) + X2

    def test_nonlinear_cancellation(self):
        x, y = Polynomial.var("x"), Polynomial.var("y")
        bowl = c(4) - x * x - y * y
        assert bowl + (x * x + y * y) == c(4)

    def test_additive_identity(self):
        p = X1 * X2 + c(3)
        assert p + Polynomial() == p

    def test_square(self):
        x = Polynomial.var("x")
        assert x * x == x**2

    def test_repeated_contraction(self):
        # closing 1/3 of the distance twice leaves 4/9 of it
        x = Polynomial.var("x")
        xp = Polynomial.var("x'")
        once = xp.scale(Fraction(2, 3))
        twice = once.substitute({"x'": x.scale(Fraction(2, 3))})
        assert twice == x.scale(Fraction(4, 9))
        assert twice.evaluate({"x": 3}) == Fraction(4, 3)

    def test_multiplicative_identity(self):
        p = X1**2 - X2.scale(5)
        assert p * c(1) == p

    def test_scale_negation(self):
        assert (X1 + X2).scale(-1) == -(X1 + X2)

    def test_scale_discounted_reward(self):
        assert c(110).scale(Fraction(9, 10)) == c(99)

    def test_scale_identity_and_zero(self):
        p = X1 * X1 + c(7)
        assert p.scale(1) == p
        assert p.scale(0) == Polynomial()


class TestSubstitution:
    def test_worked_example(self):
        xp1, xp2 = Polynomial.var("x1'"), Polynomial.var("x2'")
        sigma = {"x1'": X1 + X2, "x2'": X1**2}
        assert (xp1 + xp2).substitute(sigma) == X1 + X2 + X1**2

    def test_capacity_boundary(self):
        kp = Polynomial.var("k'")
        p = kp + X2 - c(100)
        assert p.substitute({"k'": K + X1}) == K + X1 + X2 - c(100)

    def test_empty_sigma_is_identity(self):
        p = X1 * X2
        assert p.substitute({}) is p

    def test_disjointness_enforced(self):
        with pytest.raises(ValueError, match="occur in replacement"):
            X1.substitute({"x1": X1 + c(1)})

    def test_composition_law(self):
        rng = Random(11)
        for _ in range(30):
            p = rand_poly(rng)
            sigma = {"x1": rand_poly(rng, syms=("u", "v"), max_deg=2),
                     "k": rand_poly(rng, syms=("u",), max_deg=2)}
            q = p.substitute(sigma)
            for _ in range(5):
                s = rand_point(rng, syms=("u", "v", "x2"))
                extended = dict(s)
                extended["x1"] = sigma["x1"].evaluate(s)
                extended["k"] = sigma["k"].evaluate(s)
                assert q.evaluate(s) == p.evaluate(extended)

    def test_disjoint_substitutions_commute(self):
        rng = Random(12)
        for _ in range(20):
            p = rand_poly(rng)
            s1 = {"x1": rand_poly(rng, syms=("u",), max_deg=2)}
            s2 = {"x2": rand_poly(rng, syms=("v",), max_deg=2)}
            assert p.substitute(s1).substitute(s2) == p.substitute(s2).substitute(s1)


class TestEvaluation:
    def test_paper_bowl(self):
        x, y = Polynomial.var("x"), Polynomial.var("y")
        bowl = c(4) - x * x - y * y
        assert bowl.evaluate({"x": 1, "y": 1}) == 2

    def test_zero_everywhere(self):
        assert Polynomial().evaluate({}) == 0

    def test_energy_threshold(self):
        t = Polynomial.var("t")
        threshold = c(3) + t.scale(Fraction("0.0002"))
        assert threshold.evaluate({"t": 3600}) == Fraction("3.72")

    def test_unassigned_variable(self):
        with pytest.raises(ValueError, match="no value assigned"):
            X1.evaluate({"x2": 1})

    def test_eval_laws_random(self):
        rng = Random(13)
        for _ in range(100):
            p, q = rand_poly(rng), rand_poly(rng)
            s = rand_point(rng)
            assert (p + q).evaluate(s) == p.evaluate(s) + q.evaluate(s)
            assert (p - q).evaluate(s) == p.evaluate(s) - q.evaluate(s)
            assert (p * q).evaluate(s) == p.evaluate(s) * q.evaluate(s)
            factor = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            assert p.scale(factor).evaluate(s) == factor * p.evaluate(s)


class TestCanonicity:
    def test_addition_commutes_structurally(self):
        rng = Random(14)
        for _ in range(50):
            p, q = rand_poly(rng), rand_poly(rng)
            assert p + q == q + p
            assert hash(p + q) == hash(q + p)

    def test_decimal_literal_is_exact(self):
        assert Fraction("0.0002") == Fraction(1, 5000)

    def test_printed_form_round_trips_equality(self):
        rng = Random(15)
        seen = {}
        for _ in range(50):
            p = rand_poly(rng)
            text = str(p)
            if text in seen:
                assert seen[text] == p
            seen[text] = p


class TestNormalization:
    def test_capacity_comparison(self):
        dec, flipped = normalize_cmp(K + X1, "<=", c(100))
        assert flipped is True
        assert dec == IneqDec(X1 + K - c(100), strict=True)
        dec2, flipped2 = normalize_cmp(K + X1, ">", c(100))
        assert (dec2, flipped2) == (dec, False)

    def test_circle_comparisons_share_decision(self):
        x, y = Polynomial.var("x"), Polynomial.var("y")
        a = normalize_cmp(x * x + y * y, "<", c(4))
        b = normalize_cmp(c(4), ">", x * x + y * y)
        assert a == b
        assert a[1] is True  # stored as the complement x^2 + y^2 - 4 >= 0

    def test_constant_comparison_rejected(self):
        with pytest.raises(ConstantComparisonError) as err:
            normalize_cmp(X1, "<=", X1)
        assert err.value.truth is True  # 0 <= 0

    def test_negation_shares_decision_with_opposite_flip(self):
        rng = Random(16)
        negate = {"<": ">=", "<=": ">", ">": "<=", ">=": "<"}
        for _ in range(100):
            p, q = rand_poly(rng), rand_poly(rng)
            if (p - q).is_constant():
                continue
            op = rng.choice(list(negate))
            dec, flip = normalize_cmp(p, op, q)
            dec_neg, flip_neg = normalize_cmp(p, negate[op], q)
            assert dec == dec_neg
            assert flip != flip_neg
            assert dec.is_normalized()

    def test_coefficients_scaled_coprime(self):
        dec, _ = normalize_ineq(X1.scale(Fraction(4, 6)) + X2.scale(Fraction(2, 3)), True)
        assert dec.poly == X1 + X2
