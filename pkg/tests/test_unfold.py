from __future__ import annotations

from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from common import corpus
from gstrat.abelian import all_subgroups, subgroup_closure
from gstrat.strat import circle, cone, depth, height, maximal_strata, minimal_strata, point, rot_sphere, validate
from gstrat.unfold import (
    check_unfold_all_quotient_commutes,
    check_unfold_quotient_commutes,
    elementary_unfold,
    unfold_all,
)


def _shape(s):
    return (s.dim, s.isotropy.elements)


def test_cone_over_rot_sphere_unfolds_in_two_steps():
    X = cone(rot_sphere(4))
    step = elementary_unfold(X)
    assert step.result.ids == ["cN", "cS", "cT"]
    assert depth(step.result) == 1
    chain = unfold_all(X)
    assert len(chain.steps) == 2
    assert chain.result.ids == ["cT"] and chain.total_provenance == {"cT": "cT"}


def test_isolated_strata_are_doubled():
    step = elementary_unfold(circle(3))
    assert step.result.ids == ["o+", "o-"]
    assert step.duplicated == {"o"}
    assert step.provenance == {"o+": "o", "o-": "o"}
    assert step.result.compact
    assert unfold_all(point()).steps == ()


def test_link_of_survivor_is_kept():
    X = cone(rot_sphere(2))
    Y = elementary_unfold(X).result
    assert Y["cN"].link == X["cN"].link
    assert validate(Y).ok


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_elementary_step_contract(data):
    X = data.draw(st.sampled_from(corpus())).space
    step = elementary_unfold(X)
    Y = step.result
    assert validate(Y).ok
    mins, maxs = minimal_strata(X), maximal_strata(X)
    expected = Counter(_shape(s) for s in X.strata if s.id not in mins)
    expected += Counter(_shape(s) for s in X.strata if s.id in mins & maxs for _ in range(2))
    assert Counter(_shape(s) for s in Y.strata) == expected
    # induced suborder on the surviving strata
    survivors = {s.id for s in X.strata if s.id not in mins}
    assert Y.order == {(a, b) for a, b in X.order if a in survivors and b in survivors}
    if depth(X) >= 1:
        assert depth(Y) == depth(X) - 1
    if X.compact:
        assert Y.compact


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_provenance_tracks_heights(data):
    X = data.draw(st.sampled_from(corpus())).space
    chain = unfold_all(X)
    assert len(chain.steps) == depth(X)
    final = chain.result
    assert depth(final) == 0 and not final.order and all(s.link is None for s in final.strata)
    survivors = {sid: sid for sid in X.ids}
    for j, step in enumerate(chain.steps, start=1):
        survivors = {new: survivors[old] for new, old in step.provenance.items()}
        originals = set(survivors.values())
        # originals of height >= j survive; lower ones only as duplicated isolated pieces
        assert {sid for sid in X.ids if height(X, sid) >= j} <= originals
        for new, old in survivors.items():
            if height(X, old) < j:
                assert new != old


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_unfolding_commutes_with_quotients(data):
    X = data.draw(st.sampled_from(corpus())).space
    K = data.draw(st.sampled_from([K for K in all_subgroups(X.top) if K <= X.acting]))
    assert check_unfold_quotient_commutes(X, K) is not None
    assert check_unfold_all_quotient_commutes(X, K) is not None


def test_commutation_example():
    X = cone(rot_sphere(4))
    K = subgroup_closure(X.top, [(2,)])
    w = check_unfold_quotient_commutes(X, K)
    assert w is not None and w.stratum_map == {"cN": "cN", "cS": "cS", "cT": "cT"}


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_provenance_multiplicities(data):
    X = data.draw(st.sampled_from(corpus())).space
    step = elementary_unfold(X)
    counts = Counter(step.provenance.values())
    mins = minimal_strata(X)
    assert step.duplicated == mins & maximal_strata(X)
    for sid in X.ids:
        want = 2 if sid in step.duplicated else (0 if sid in mins else 1)
        assert counts[sid] == want
    assert depth(step.result) == max(depth(X) - 1, 0)
