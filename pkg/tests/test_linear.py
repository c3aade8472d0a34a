"""Exact feasibility solver: pinned cases, planted systems, strictness."""

import random
from fractions import Fraction as F

import pytest

from hassett.linear import Constraint, LinearSystem, evaluate, solve_feasibility


def le(coeffs, bound):
    return Constraint(tuple(F(c) for c in coeffs), "<=", F(bound))


def lt(coeffs, bound):
    return Constraint(tuple(F(c) for c in coeffs), "<", F(bound))


def eq(coeffs, bound):
    return Constraint(tuple(F(c) for c in coeffs), "=", F(bound))


class TestPinned:
    def test_empty_system_returns_origin(self):
        assert solve_feasibility(LinearSystem(3, ())) == (F(0), F(0), F(0))

    def test_single_interval(self):
        sys_ = LinearSystem(1, (le([1], 5), le([-1], -3)))
        w = solve_feasibility(sys_)
        assert w is not None and F(3) <= w[0] <= F(5)

    def test_point_interval_needs_both_non_strict(self):
        closed = LinearSystem(1, (le([1], 2), le([-1], -2)))
        assert solve_feasibility(closed) == (F(2),)
        half_open = LinearSystem(1, (lt([1], 2), le([-1], -2)))
        assert solve_feasibility(half_open) is None

    def test_strict_boundary_is_respected(self):
        # x < 1 together with x >= 1 has no solution; <= 1 does
        assert solve_feasibility(LinearSystem(1, (lt([1], 1), le([-1], -1)))) is None
        w = solve_feasibility(LinearSystem(1, (le([1], 1), le([-1], -1))))
        assert w == (F(1),)

    def test_unbounded_directions(self):
        only_lower = solve_feasibility(LinearSystem(1, (lt([-1], -3),)))
        assert only_lower is not None and only_lower[0] > 3
        only_upper = solve_feasibility(LinearSystem(1, (lt([1], 0),)))
        assert only_upper is not None and only_upper[0] < 0

    def test_equality_chain(self):
        sys_ = LinearSystem(2, (eq([1, -1], 0), eq([0, 1], F(1, 3))))
        assert solve_feasibility(sys_) == (F(1, 3), F(1, 3))

    def test_ground_contradiction(self):
        sys_ = LinearSystem(2, (le([1, 1], 1), le([-1, -1], -2)))
        assert solve_feasibility(sys_) is None

    def test_strict_cycle_contradiction(self):
        # x < y, y < z, z < x
        sys_ = LinearSystem(
            3, (lt([1, -1, 0], 0), lt([0, 1, -1], 0), lt([-1, 0, 1], 0))
        )
        assert solve_feasibility(sys_) is None

    def test_mixed_scale_coefficients(self):
        sys_ = LinearSystem(
            2,
            (
                le([F(2, 3), F(1, 5)], F(7, 15)),
                le([F(-2, 3), F(-1, 5)], F(-7, 15)),
                le([0, 1], F(1)),
                le([0, -1], F(0)),
            ),
        )
        w = solve_feasibility(sys_)
        assert w is not None
        assert F(2, 3) * w[0] + F(1, 5) * w[1] == F(7, 15)

    def test_chamber_shaped_system(self):
        # three weights: pairs small, total strictly above 2 is impossible
        cons = [le([1, 1, 0], 1), le([1, 0, 1], 1), le([0, 1, 1], 1)]
        cons.append(lt([-1, -1, -1], -2))
        assert solve_feasibility(LinearSystem(3, tuple(cons))) is None
        # relaxing every pair to 3/2 allows totals up to 9/4
        relaxed = (
            le([1, 1, 0], F(3, 2)),
            le([1, 0, 1], F(3, 2)),
            le([0, 1, 1], F(3, 2)),
            lt([-1, -1, -1], -2),
        )
        w = solve_feasibility(LinearSystem(3, relaxed))
        assert w is not None and sum(w) > 2


def random_fraction(rng, span=4, denom_max=6):
    return F(rng.randint(-span, span), rng.randint(1, denom_max))


def sparse_coeffs(rng, nv):
    """At most three nonzero entries, like the facet rows the solver serves."""
    support = rng.sample(range(nv), k=rng.randint(1, min(3, nv)))
    row = [F(0)] * nv
    for j in support:
        c = F(0)
        while c == 0:
            c = random_fraction(rng)
        row[j] = c
    return tuple(row)


def planted_feasible(rng, nv, nc):
    """A system built around a secret solution point."""
    point = tuple(random_fraction(rng) for _ in range(nv))
    cons = []
    for _ in range(nc):
        coeffs = sparse_coeffs(rng, nv)
        value = sum((c * x for c, x in zip(coeffs, point)), F(0))
        kind = rng.choice(["<=", "<", "=", "slack"])
        if kind == "<=":
            cons.append(Constraint(coeffs, "<=", value))
        elif kind == "<":
            cons.append(Constraint(coeffs, "<", value + F(1, rng.randint(1, 9))))
        elif kind == "=":
            cons.append(Constraint(coeffs, "=", value))
        else:
            cons.append(Constraint(coeffs, "<=", value + F(rng.randint(0, 3))))
    return LinearSystem(nv, tuple(cons)), point


def planted_infeasible(rng, nv, nc):
    """A random system plus a pair of directly clashing constraints."""
    sys_, _ = planted_feasible(rng, nv, max(0, nc - 2))
    coeffs = sparse_coeffs(rng, nv)
    bound = random_fraction(rng)
    clash = (
        Constraint(coeffs, "<=", bound),
        Constraint(tuple(-c for c in coeffs), "<", -bound),
    )
    return LinearSystem(nv, sys_.constraints + clash)


class TestPlanted:
    def test_feasible_systems_yield_verified_witnesses(self):
        rng = random.Random(20260817)
        for trial in range(120):
            nv = rng.randint(1, 5)
            nc = rng.randint(1, 2 * nv + 2)
            system, point = planted_feasible(rng, nv, nc)
            assert evaluate(system, point), "planting bug"
            w = solve_feasibility(system)
            assert w is not None, f"trial {trial}: lost a feasible system"
            assert evaluate(system, w)

    def test_contradictions_are_detected(self):
        rng = random.Random(8177)
        for trial in range(120):
            nv = rng.randint(1, 5)
            nc = rng.randint(2, 2 * nv + 2)
            system = planted_infeasible(rng, nv, nc)
            assert solve_feasibility(system) is None, f"trial {trial}"


class TestValidation:
    def test_wrong_arity_rejected(self):
        with pytest.raises(ValueError):
            LinearSystem(2, (le([1], 0),))

    def test_unknown_relation_rejected(self):
        with pytest.raises(ValueError):
            Constraint((F(1),), ">=", F(0))

    def test_evaluate_dimension_check(self):
        with pytest.raises(ValueError):
            evaluate(LinearSystem(2, ()), (F(0),))
