import pytest
from hypothesis import given, strategies as st

from wplab.coener import CodedSet, Schedule
from wplab.perms import (
    IDENTITY,
    BoundViolation,
    Point,
    Region,
    alpha_from_f,
    apply,
    apply_inverse,
    beta_from_g,
    bounded_equal,
    compose,
    cycle_adder,
    first_difference,
    inverse,
    is_identity_on,
    order_on,
    orbit,
    sigma_line,
    sigma_paired,
    tau_paired,
    tau_triples,
)

points = st.builds(Point, st.integers(-20, 20), st.integers(0, 200))


def f_2_1(x, n):
    return 1 if (x, n) == (2, 1) else 0


def coded_g0_is_8():
    class G:
        def graph(self, t, v):
            return (t, v) == (0, 8)

    return G()


class TestBasics:
    def test_identity(self):
        assert apply(IDENTITY, Point(5, 3)) == Point(5, 3)

    def test_sigma_paired(self):
        s = sigma_paired()
        assert apply(s, Point(0, 5)) == Point(2, 5)
        assert apply_inverse(s, Point(2, 5)) == Point(0, 5)
        assert s(Point(1, 0)) == Point(3, 0)
        assert s(Point(-2, 7)) == Point(0, 7)
        assert s.backward(Point(0, 7)) == Point(-2, 7)

    def test_compose_order(self):
        s = sigma_paired()
        assert compose(s, s)(Point(0, 11)) == Point(4, 11)
        # first p, then q
        p = compose(sigma_paired(), tau_paired())
        assert p(Point(-2, 3)) == Point(1, 3)
        q = compose(tau_paired(), sigma_paired())
        assert q(Point(-2, 3)) == Point(0, 3)

    @given(points)
    def test_compose_with_identity_and_inverse(self, pt):
        for p in (sigma_paired(), tau_paired(), alpha_from_f(f_2_1), tau_triples()):
            assert compose(p, IDENTITY)(pt) == p(pt)
            assert compose(p, inverse(p))(pt) == pt
            assert compose(inverse(p), p)(pt) == pt

    def test_power_matches_repeated_compose(self):
        s = sigma_line()
        assert s.power(5)(Point(0, 0)) == Point(5, 0)
        assert s.power(-3)(Point(0, 0)) == Point(-3, 0)
        t = tau_triples()
        assert t.power(2)(Point(0, 4)) == Point(0, 4)
        assert t.power(3)(Point(0, 4)) == Point(0, 5)


class TestConstructors:
    def test_tau_paired(self):
        t = tau_paired()
        assert t(Point(1, 7)) == Point(0, 7)
        assert t(Point(4, 2)) == Point(4, 2)

    def test_alpha(self):
        a = alpha_from_f(f_2_1)
        assert a(Point(4, 3)) == Point(4, 4)
        assert a(Point(4, 4)) == Point(4, 3)
        assert a(Point(4, 5)) == Point(4, 5)
        assert a(Point(5, 3)) == Point(5, 3)
        assert a.backward(Point(4, 3)) == Point(4, 4)

    def test_alpha_cycle_length(self):
        a = alpha_from_f(lambda x, n: x)
        # block n of column 2x is one (x+1)-cycle
        for x in range(5):
            assert len(orbit(a, Point(2 * x, 3 * (x + 1)))) == x + 1

    def test_alpha_bound_violation(self):
        a = alpha_from_f(lambda x, n: x + 1)
        with pytest.raises(BoundViolation) as info:
            a(Point(2, 0))
        assert (info.value.x, info.value.n, info.value.value) == (1, 0, 2)

    def test_sigma_line(self):
        s = sigma_line()
        assert s(Point(0, 9)) == Point(1, 9)
        assert s(Point(-3, 0)) == Point(-2, 0)
        assert s.backward(Point(1, 9)) == Point(0, 9)

    def test_tau_triples(self):
        t = tau_triples()
        assert t(Point(0, 4)) == Point(0, 5)
        assert t(Point(0, 3)) == Point(0, 3)
        assert t(Point(2, 4)) == Point(2, 4)

    def test_beta(self):
        b = beta_from_g(coded_g0_is_8())
        assert b(Point(8, 0)) == Point(8, 1)
        assert b(Point(8, 1)) == Point(8, 0)
        assert b(Point(8, 2)) == Point(8, 2)
        assert b(Point(7, 0)) == Point(7, 0)

    def test_beta_from_coded_set(self):
        cs = CodedSet(Schedule.finite({0: 4}))
        b = beta_from_g(cs.g)
        # the padded schedule emits 8 at step 0
        assert cs.g(0) == 16
        assert b(Point(16, 0)) == Point(16, 1)
        assert b(Point(8, 0)) == Point(8, 0)
        # step 1 of the padded schedule emits 1, so g(1) = 2
        assert b(Point(2, 3)) == Point(2, 4)
        assert b(Point(3, 3)) == Point(3, 3)


class TestCycleAdder:
    def test_empty_and_unit(self):
        pts = [Point(0, r) for r in range(10)]
        assert all(cycle_adder([])(p) == p for p in pts)
        assert all(cycle_adder([1])(p) == p for p in pts)

    def test_three_cycle(self):
        c = cycle_adder([3])
        assert orbit(c, Point(0, 0)) == [Point(0, 0), Point(0, 1), Point(0, 2)]
        assert order_on(c, [Point(0, r) for r in range(6)]) == 3

    def test_blocks_allocated_in_order(self):
        c = cycle_adder([2, 3])
        assert orbit(c, Point(0, 2)) == [Point(0, 2), Point(0, 3), Point(0, 4)]
        assert order_on(c, [Point(0, r) for r in range(8)]) == 6

    def test_enumerator_snapshot(self):
        e = Schedule.finite({0: 3, 4: 2})
        assert order_on(cycle_adder(e, steps=10), [Point(0, r) for r in range(8)]) == 6
        with pytest.raises(ValueError):
            cycle_adder(e)

    @given(st.lists(st.integers(1, 6), max_size=6), points)
    def test_inverse_round_trip(self, lengths, pt):
        c = cycle_adder(lengths)
        assert c.backward(c(pt)) == pt


class TestComparison:
    def test_bounded_equal(self):
        r = Region(-2, 2, 10)
        assert bounded_equal(tau_triples(), tau_triples(), r)
        assert is_identity_on(compose(tau_paired(), tau_paired()), r)
        assert not bounded_equal(sigma_line(), IDENTITY, Region(0, 0, 0))

    def test_first_difference_is_column_major(self):
        assert first_difference(tau_triples(), IDENTITY, Region(0, 1, 9)) == Point(0, 1)
        assert first_difference(tau_paired(), IDENTITY, Region(-1, 1, 3)) == Point(0, 0)
