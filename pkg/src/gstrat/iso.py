"""Equivariant isomorphism test for stratified spaces at model granularity.

Two spaces are isomorphic when there is a group isomorphism phi of the top
groups and a bijection of strata preserving order, dimension and compactness
with phi(G_S) = G_f(S), and, for each singular stratum, a link isomorphism
(under the same phi) that is compatible with the attach maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from .abelian import FiniteAbelianGroup, GroupElement, Subgroup, subgroup_closure
from .strat import StratSpace


@dataclass(frozen=True)
class GroupIso:
    """Isomorphism determined by the images of the standard generators e_j."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    images: tuple[GroupElement, ...]

    def __call__(self, g) -> GroupElement:
        out = self.target.zero
        for k, img in zip(g, self.images):
            out = self.target.add(out, self.target.scale(k, img))
        return out

    def map_subgroup(self, H: Subgroup) -> Subgroup:
        return subgroup_closure(self.target, [self(h) for h in H.generators])

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            img == tuple(int(i == j) % n for i, n in enumerate(self.source.moduli))
            for j, img in enumerate(self.images)
        )


@dataclass
class SpaceIso:
    stratum_map: dict[str, str]
    group_map: GroupIso
    link_isos: dict[str, SpaceIso] = field(default_factory=dict)

    def summary(self) -> str:
        pairs = ", ".join(f"{a}->{b}" for a, b in self.stratum_map.items())
        gens = "identity" if self.group_map.is_identity() else ", ".join(
            f"e{j}->{img}" for j, img in enumerate(self.group_map.images)
        )
        return f"strata {{{pairs}}}; group {gens}"


def group_isomorphisms(G: FiniteAbelianGroup, H: FiniteAbelianGroup) -> Iterator[GroupIso]:
    """All isomorphisms G -> H, the identity (when G == H) first.

    Images of e_j range over elements of H killed by n_j; a prefix is pruned
    as soon as the partial map fails to be injective.
    """
    if G.invariant_factors != H.invariant_factors:
        return
    elems = list(H.elements())
    candidates = []
    for j, n in enumerate(G.moduli):
        ok = [y for y in elems if H.scale(n, y) == H.zero]
        if G == H:
            e = tuple(int(i == j) % m for i, m in enumerate(H.moduli))
            ok.sort(key=lambda y: y != e)
        candidates.append(ok)

    def extend(j, chosen, size):
        if j == G.rank:
            yield GroupIso(G, H, tuple(chosen))
            return
        for y in candidates[j]:
            span = subgroup_closure(H, chosen + [y]).order
            if span == size * G.moduli[j]:
                yield from extend(j + 1, chosen + [y], span)

    yield from extend(0, [], 1)


def is_isomorphic(X: StratSpace, Y: StratSpace) -> SpaceIso | None:
    """A witness isomorphism X -> Y, or None."""
    if X.top.invariant_factors != Y.top.invariant_factors:
        return None
    # cheap necessary check: match up to abstract isomorphism type of labels
    coarse = lambda a, b: a.invariant_factors == b.invariant_factors  # noqa: E731
    if next(_space_isos(X, Y, coarse, None), None) is None:
        return None
    for phi in group_isomorphisms(X.top, Y.top):
        labels = _phi_eq(phi)
        if not labels(X.acting, Y.acting):
            continue
        found = next(_space_isos(X, Y, labels, None), None)
        if found is not None:
            return _witness(found, phi)
    return None


def _phi_eq(phi: GroupIso) -> Callable[[Subgroup, Subgroup], bool]:
    cache: dict = {}

    def eq(a: Subgroup, b: Subgroup) -> bool:
        if a.elements not in cache:
            cache[a.elements] = phi.map_subgroup(a)
        return cache[a.elements] == b

    return eq


def _witness(found, phi) -> SpaceIso:
    smap, links = found
    return SpaceIso(smap, phi, {sid: _witness(sub, phi) for sid, sub in links.items()})


def _signature(X: StratSpace, sid: str):
    s = X[sid]
    return (s.dim, len(X.below(sid)), len(X.above(sid)), s.link is None)


def _space_isos(X: StratSpace, Y: StratSpace, labels: Callable[[Subgroup, Subgroup], bool], pin) -> Iterator[tuple[dict, dict]]:
    """Yield (stratum_map, link_maps) pairs; `pin(x_id, y_id)` adds external constraints."""
    if len(X.strata) != len(Y.strata) or len(X.order) != len(Y.order) or X.compact != Y.compact:
        return
    if not labels(X.acting, Y.acting):
        return
    xs = sorted(X.ids, key=lambda sid: (-len(X.above(sid)) - len(X.below(sid)), X.ids.index(sid)))
    sig_y: dict = {}
    for t in Y.ids:
        sig_y.setdefault(_signature(Y, t), []).append(t)

    def candidates(s, assigned, used):
        for t in sig_y.get(_signature(X, s), []):
            if t in used:
                continue
            if not labels(X[s].isotropy, Y[t].isotropy):
                continue
            if pin is not None and not pin(s, t):
                continue
            if all(X.less(s, a) == Y.less(t, b) and X.less(a, s) == Y.less(b, t) for a, b in assigned.items()):
                yield t

    def extend(i, assigned, used):
        if i == len(xs):
            yield dict(assigned)
            return
        s = xs[i]
        for t in candidates(s, assigned, used):
            assigned[s] = t
            used.add(t)
            yield from extend(i + 1, assigned, used)
            del assigned[s]
            used.discard(t)

    for smap in extend(0, {}, set()):
        links = {}
        for s in X.strata:
            if s.link is None:
                continue
            t = Y[smap[s.id]]
            if t.link is None or s.attach is None or t.attach is None:
                break
            sa, ta = s.attach, t.attach

            def link_pin(a, b, sa=sa, ta=ta):
                return a in sa and b in ta and smap.get(sa[a]) == ta[b]

            sub = next(_space_isos(s.link, t.link, labels, link_pin), None)
            if sub is None:
                break
            links[s.id] = sub
        else:
            yield {s: smap[s] for s in X.ids}, links
