"""Feasibility checking and infeasible-path pruning."""
from fractions import Fraction
from random import Random

import pytest

from polymdp import parse_domain_file, builtin_domain_path, solve
from polymdp.poly import Polynomial, normalize_cmp
from polymdp.prune import ConstraintSet, feasible, prune
from polymdp.xadd import XaddStore

from oracles import vertex_feasible


def c(v) -> Polynomial:
    return Polynomial.const(Fraction(v))


def box(**kw):
    return {k: (Fraction(lo), Fraction(hi)) for k, (lo, hi) in kw.items()}


class TestFeasible:
    def test_contradictory_halflines(self):
        x = Polynomial.var("x")
        cs = ConstraintSet(((x - c(1), False, True), (-x, False, True)),
                           box(x=(0, 100)))
        assert feasible(cs) is False

    def test_relaxation_keeps_shared_boundary(self):
        # k+x1 <= 100 and k+x1 > 100 share the boundary point after
        # relaxation, so this system is *not* pruned: conservativeness.
        k, x1 = Polynomial.var("k"), Polynomial.var("x1")
        cs = ConstraintSet(
            ((c(100) - k - x1, False, True), (k + x1 - c(100), True, True)),
            box(k=(0, 100), x1=(0, 100)))
        assert feasible(cs) is True

    def test_interval_reasoning(self):
        k, x1 = Polynomial.var("k"), Polynomial.var("x1")
        cs = ConstraintSet(
            ((x1 + k - c(100), True, True),
             (c(50) - x1, False, True),
             (c(40) - k, False, True)),
            box(k=(0, 100), x1=(0, 100)))
        assert feasible(cs) is False

    def test_nonlinear_rejected(self):
        x = Polynomial.var("x")
        cs = ConstraintSet(((x * x - c(1), False, True),), box(x=(0, 10)))
        with pytest.raises(ValueError, match="nonlinear"):
            feasible(cs)

    def test_negated_assertion(self):
        x = Polynomial.var("x")
        # not(x - 5 > 0) relaxes to x <= 5; combined with x >= 7: empty
        cs = ConstraintSet(((x - c(5), True, False), (x - c(7), False, True)),
                           box(x=(0, 10)))
        assert feasible(cs) is False

    def test_agrees_with_vertex_enumeration(self):
        rng = Random(31)
        agree = 0
        for _ in range(120):
            n = rng.randint(1, 4)
            syms = [f"x{i}" for i in range(n)]
            bounds = {}
            for s in syms:
                lo = Fraction(rng.randint(-6, 2))
                bounds[s] = (lo, lo + rng.randint(0, 8))
            rows = []
            constraints = []
            for _ in range(rng.randint(1, 8)):
                coeffs = [Fraction(rng.randint(-3, 3)) for _ in syms]
                if all(v == 0 for v in coeffs):
                    continue
                rhs = Fraction(rng.randint(-10, 10))
                rows.append((coeffs, rhs))
                # a.x <= rhs  ==  rhs - a.x >= 0
                poly = c(rhs)
                for s, coeff in zip(syms, coeffs):
                    poly = poly - Polynomial.var(s).scale(coeff)
                constraints.append((poly, False, True))
            cs = ConstraintSet(tuple(constraints), dict(bounds))
            expect = vertex_feasible(rows, [bounds[s] for s in syms])
            assert feasible(cs) == expect
            agree += 1
        assert agree >= 100


def rover_v3(pruned: bool):
    m = parse_domain_file(builtin_domain_path("rover_linear_k3"))
    r = solve(m, 3, use_prune=pruned)
    return m, r


class TestPrune:
    def test_terminal_unchanged(self):
        s = XaddStore()
        s.declare_continuous("x", 0, 10)
        t = s.terminal(Polynomial.var("x"))
        assert prune(s, t) == t

    def test_implied_decision_removed(self):
        s = XaddStore()
        s.declare_continuous("x", 0, 100)
        x = Polynomial.var("x")
        d_outer, fo = normalize_cmp(x, ">=", c(60))
        d_inner, fi = normalize_cmp(x, ">=", c(50))
        s.register_decision(d_outer)  # outer test orders first
        inner = s.ite(d_inner, fi, s.terminal(1), s.terminal(2))
        f = s.ite(d_outer, fo, inner, s.terminal(3))
        g = prune(s, f)
        # under x >= 60 the inner test x >= 50 is settled: true child kept
        dec_id, hi, lo = s.node_children(g)
        assert s.decision(dec_id) == d_outer
        assert s.terminal_poly(hi) == c(1)
        assert s.terminal_poly(lo) == c(3)

    def test_rover_value_function_soundness(self):
        m, r_plain = rover_v3(False)
        store = m.store
        v3 = r_plain.values[3]
        v3_pruned = prune(store, v3)
        n_before, _, _ = store.diagram_stats(v3)
        n_after, _, _ = store.diagram_stats(v3_pruned)
        assert n_after <= n_before
        rng = Random(32)
        for _ in range(1000):
            st = store.sample_state(rng)
            assert store.evaluate(v3_pruned, st) == store.evaluate(v3, st)

    def test_idempotent(self):
        m, r_plain = rover_v3(False)
        store = m.store
        v3 = r_plain.values[3]
        once = prune(store, v3)
        assert prune(store, once) == once

    def test_monotone_on_random_diagrams(self):
        s = XaddStore()
        s.declare_continuous("u", 0, 10)
        s.declare_continuous("v", 0, 10)
        rng = Random(33)
        u, v = Polynomial.var("u"), Polynomial.var("v")
        for _ in range(40):
            f = s.terminal(rng.randint(0, 3))
            for _ in range(rng.randint(1, 6)):
                lhs = u.scale(rng.randint(-2, 2)) + v.scale(rng.randint(-2, 2))
                if lhs.is_constant():
                    continue
                dec, flipped = normalize_cmp(lhs, rng.choice(("<=", ">")),
                                             c(rng.randint(-5, 25)))
                f = s.ite(dec, flipped, s.terminal(rng.randint(0, 3)), f)
            g = prune(s, f)
            s.validate_diagram(g)
            assert s.diagram_stats(g)[0] <= s.diagram_stats(f)[0]
            for _ in range(25):
                st = s.sample_state(rng)
                assert s.evaluate(g, st) == s.evaluate(f, st)
