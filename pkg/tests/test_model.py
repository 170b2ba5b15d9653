from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gstrat.abelian import all_subgroups, quotient, subgroup_closure
from gstrat.errors import ModelError
from gstrat.iso import is_isomorphic
from gstrat.model import (
    Circle,
    Cone,
    Euclidean,
    Product,
    RotSphere,
    quotient_term,
    realize,
    sample_in_tube,
    skeleton,
    thom_mather_check,
)
from gstrat.strat import circle, cone, depth, orbit_space

PI = math.pi


def test_realize_skeletons():
    assert realize(Cone(Circle(4))).skeleton == cone(circle(4))
    with pytest.raises(ModelError):
        realize(Cone(Euclidean(1)))
    X = realize(Product(Euclidean(2), Cone(Circle(1)))).skeleton
    assert depth(X) == 1 and {s.dim for s in X.strata} == {2, 4}
    with pytest.raises(ModelError):
        realize(Product(Circle(2), RotSphere(2)))
    with pytest.raises(ModelError):
        realize(Circle(0))


def test_action_examples():
    R = realize(Circle(4))
    assert R.act((1,), 0.0) == pytest.approx(PI / 2)
    C = realize(Cone(Circle(4)))
    assert C.act((3,), (1.0, 0.0)) == (0.0, 0.0)
    x = C.act((2,), (0.3, 0.7))
    assert C.close(x, (0.3 + PI, 0.7), 1e-12)
    with pytest.raises(ModelError):
        C.act((4,), (0.3, 0.7))


def test_canonical_vertex():
    C = realize(Cone(Circle(4)))
    assert C.canonical((2.5, 0.0)) == (0.0, 0.0)
    assert C.locate((2.5, 0.0)) == "v" and C.locate((2.5, 0.1)) == "co"
    S = realize(RotSphere(3))
    assert S.canonical((1.2, 0.0)) == (0.0, 0.0)
    assert [S.locate(p) for p in [(0, 0), (1, PI), (1, 1)]] == ["N", "S", "T"]
    with pytest.raises(ModelError):
        C.canonical((0.1, -1.0))


def test_radium_examples():
    C = realize(Cone(Circle(1)))
    assert C.radium("v", (0.4, 0.7)) == pytest.approx(0.7)
    assert C.radium("v", (0.0, 0.0)) == 0
    P = realize(Product(Euclidean(1), Cone(Circle(1))))
    assert P.radium("v", ((5.0,), (1.0, 0.3))) == pytest.approx(0.3)
    with pytest.raises(ModelError):
        C.radium("co", (0.4, 0.7))
    S = realize(RotSphere(4))
    assert S.radium("N", (1.0, 0.4)) == pytest.approx(0.4)
    assert S.radium("S", (1.0, 0.4)) == pytest.approx(PI - 0.4)


def test_radial_examples():
    C = realize(Cone(Circle(4)))
    assert C.close(C.radial(2, (0.5, 0.7), "v"), (0.5, 1.4), 1e-12)
    assert C.radial(1, (0.5, 0.7), "v") == (0.5, 0.7)
    assert C.radium("v", C.radial(3, (0.5, 0.5), "v")) == pytest.approx(1.5)
    with pytest.raises(ModelError):
        C.radial(0, (0.5, 0.7), "v")
    S = realize(RotSphere(4))
    with pytest.raises(ModelError):
        S.radial(10, (0.5, 1.0), "N")  # leaves the pole chart


def test_tube_unfold_and_glue_examples():
    C = realize(Cone(Circle(4)))
    e = (0.8, 1.0)
    assert C.close(C.tube_unfold("v", e, -0.5), (0.8, 0.5), 1e-12)
    assert C.tube_unfold("v", e, 0) == (0.0, 0.0)
    pre = C.tube_unfold_preimage("v", (0.8, 0.5))
    assert len(pre) == 2 and {t for _, t in pre} == {0.5, -0.5}
    assert all(C.close(p, e, 1e-12) for p, _ in pre)
    with pytest.raises(ModelError):
        C.tube_unfold("v", (0.8, 0.9), 1.0)
    x, sign = C.glue("v", e, -2)
    assert C.close(x, (0.8, 2.0), 1e-12) and sign == -1
    assert C.glue("v", e, 1) == (e, 1)
    with pytest.raises(ModelError):
        C.glue("v", e, 0)


def test_orbit_point_examples():
    R = realize(Circle(4))
    K = subgroup_closure(R.group, [(2,)])
    assert R.orbit_point(3 * PI / 2, K) == pytest.approx(PI)
    assert R.orbit_point(0.3, K) == pytest.approx(R.orbit_point(0.3 + PI, K))
    assert R.orbit_point(0.3, R.group.trivial()) == pytest.approx(0.3)
    with pytest.raises(ModelError):
        R.orbit_point(0.3, realize(Circle(2)).group.full())


@pytest.mark.parametrize("term", [Cone(RotSphere(4)), Product(Euclidean(1), Cone(Circle(6))), RotSphere(6)])
def test_quotient_term_matches_orbit_space(term):
    R = realize(term)
    for K in (subgroup_closure(R.group, [(2,)]), subgroup_closure(R.group, [(3,)]) if R.group.order % 3 == 0 else None):
        if K is None:
            continue
        Y, _ = orbit_space(R.skeleton, K)
        assert is_isomorphic(Y, skeleton(quotient_term(term, K.order))) is not None


def test_thom_mather_examples():
    assert thom_mather_check(realize(Cone(RotSphere(4))), 10_000).passed
    bad = realize(Cone(RotSphere(4))).with_epsilon({"cN": 3.0})
    report = thom_mather_check(bad, 10_000)
    assert not report.passed and ("cN", "cS") in report.violations
    flat = thom_mather_check(realize(Euclidean(2)), 100)
    assert flat.passed and not flat.witnessed


# ---------------------------------------------------------------- invariants

SPACES = [Cone(Circle(4)), Cone(RotSphere(3)), RotSphere(4), Product(Euclidean(2), Cone(RotSphere(2))),
          Cone(Product(Euclidean(0), RotSphere(6)))]


@st.composite
def tube_point(draw):
    term = draw(st.sampled_from(SPACES))
    R = realize(term)
    S = draw(st.sampled_from(sorted(R.tubes)))
    seed = draw(st.integers(0, 10_000))
    x = sample_in_tube(R, S, 1, seed=seed)[0]
    return R, S, x


@settings(max_examples=150, deadline=None)
@given(tube_point(), st.floats(0.01, 10.0), st.integers(0, 11))
def test_radium_laws(data, r, k):
    R, S, x = data
    rho = R.radium(S, x)
    g = (k % R.group.order,)
    assert R.in_tube(S, x)
    assert R.radium(S, R.act(g, x)) == pytest.approx(rho, abs=1e-9)
    if R.tube(S).kind == "pole" and r * rho >= PI:
        with pytest.raises(ModelError):
            R.radial(r, x, S)
        return
    y = R.radial(r, x, S)
    assert R.radium(S, y) == pytest.approx(r * rho, abs=1e-9)
    assert R.close(R.act(g, y), R.radial(r, R.act(g, x), S), 1e-12)


@settings(max_examples=100, deadline=None)
@given(tube_point(), st.floats(-3.0, 3.0))
def test_unfold_point_map(data, t):
    R, S, x = data
    rho = R.radium(S, x)
    e = R.radial(1 / rho, x, S)
    pre = R.tube_unfold_preimage(S, x)
    assert len(pre) == 2
    for e_, t_ in pre:
        assert R.close(R.tube_unfold(S, e_, t_), x, 1e-9)
    # the stratum is the section; off it, radium is positive
    base = R.project(S, x)
    assert R.radium(S, base) == 0 and R.locate(base) == S and R.locate(x) != S
    # liftable chart square: L(phi(u, z, 1), t) = phi(u, z, |t|)
    z = R.link_coordinate(S, x)
    assert R.close(R.chart(S, base, z, 1.0), e, 1e-9)
    y = R.tube_unfold(S, R.chart(S, base, z, 1.0), t)
    assert R.close(y, R.chart(S, base, z, abs(t)), 1e-9)
    for k in range(R.group.order):
        assert R.close(R.tube_unfold(S, R.act((k,), e), t), R.act((k,), y), 1e-9)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SPACES), st.integers(0, 1000))
def test_orbit_point_well_defined(term, seed):
    R = realize(term)
    for K in all_subgroups(R.group):
        Q, q = R.quotient(K), quotient(R.group, K)
        for x in R.sample(5, seed=seed):
            ref = R.orbit_point(x, K)
            for k in K.elements:
                assert Q.close(R.orbit_point(R.act(k, x), K), ref, 1e-9)
            # the projection is equivariant along G -> G/K
            for g in R.group.elements():
                assert Q.close(R.orbit_point(R.act(g, x), K), Q.act(q(g), ref), 1e-9)
