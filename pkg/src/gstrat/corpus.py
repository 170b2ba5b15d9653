"""A deterministic family of small valid spaces used by the property tests.

Every entry has depth <= 3, at most 12 strata and a top group of order <= 16.
Entries built from grammar terms also carry the term, so the numeric checks
can realize them.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import model as M
from .abelian import FiniteAbelianGroup, all_subgroups
from .strat import (
    StratSpace,
    circle,
    cone,
    depth,
    manifold,
    orbit_space,
    point,
    product,
    rot_sphere,
    suspension,
    validate,
)
from .unfold import elementary_unfold

MAX_DEPTH = 3
MAX_STRATA = 12
MAX_ORDER = 16

NONCYCLIC = [(2, 2), (2, 4), (2, 6), (2, 2, 2), (4, 4), (2, 8)]


@dataclass(frozen=True)
class Entry:
    name: str
    space: StratSpace
    term: object = None  # grammar term when the entry is realizable


def _fits(X: StratSpace) -> bool:
    return depth(X) <= MAX_DEPTH and len(X.strata) <= MAX_STRATA and X.top.order <= MAX_ORDER


def _terms() -> list[tuple[str, object]]:
    out = []
    for m in (1, 2, 3, 4, 6):
        out.append((f"Circle({m})", M.Circle(m)))
        out.append((f"RotSphere({m})", M.RotSphere(m)))
        out.append((f"Cone(Circle({m}))", M.Cone(M.Circle(m))))
        out.append((f"Cone(RotSphere({m}))", M.Cone(M.RotSphere(m))))
        out.append((f"Product(Euclidean(1), Cone(Circle({m})))", M.Product(M.Euclidean(1), M.Cone(M.Circle(m)))))
        out.append((f"Product(Euclidean(2), RotSphere({m}))", M.Product(M.Euclidean(2), M.RotSphere(m))))
    for m in (2, 4):
        out.append((f"Product(Euclidean(1), Cone(RotSphere({m})))", M.Product(M.Euclidean(1), M.Cone(M.RotSphere(m)))))
        out.append((f"Cone(Product(Euclidean(0), RotSphere({m})))", M.Cone(M.Product(M.Euclidean(0), M.RotSphere(m)))))
    out.append(("Euclidean(3)", M.Euclidean(3)))
    out.append(("Cone(Euclidean(0))", M.Cone(M.Euclidean(0))))
    return out


def _compact_bases() -> list[tuple[str, StratSpace]]:
    out = [("point", point())]
    for m in (1, 2, 3, 4, 5, 6, 8):
        out.append((f"circle({m})", circle(m)))
        out.append((f"rot_sphere({m})", rot_sphere(m)))
    for moduli in NONCYCLIC:
        G = FiniteAbelianGroup(moduli)
        out.append((f"free1({G})", manifold(1, G, compact=True)))
    for m in (2, 3, 4):
        out.append((f"suspension(circle({m}))", suspension(circle(m))))
        out.append((f"suspension(rot_sphere({m}))", suspension(rot_sphere(m))))
    for moduli in NONCYCLIC[:3]:
        G = FiniteAbelianGroup(moduli)
        out.append((f"suspension(free1({G}))", suspension(manifold(1, G, compact=True))))
    return out


def build_corpus() -> list[Entry]:
    """The corpus, in a fixed order with unique names."""
    entries: list[Entry] = []
    seen: set[str] = set()

    def add(name, X, term=None):
        if name in seen or not _fits(X):
            return
        seen.add(name)
        entries.append(Entry(name, X, term))

    for name, term in _terms():
        add(name, M.skeleton(term), term)
    bases = _compact_bases()
    for name, X in bases:
        add(name, X)
    for name, X in bases:
        add(f"cone({name})", cone(X))
    for name, X in bases[::3]:
        add(f"product(2, cone({name}))", product(2, cone(X)))
        add(f"product(1, {name})", product(1, X))
    for name, X in bases:
        if depth(X) >= 1:
            add(f"unfold({name})", elementary_unfold(X).result)
    # orbit spaces by the largest proper nontrivial subgroup
    for name, X in list(bases):
        subs = [K for K in all_subgroups(X.top) if not K.is_trivial() and not K.is_full()]
        if subs:
            K = max(subs, key=lambda H: (H.order, H.elements))
            add(f"orbit({name}, {K})", orbit_space(X, K)[0])
            add(f"cone(orbit({name}, {K}))", cone(orbit_space(X, K)[0]))
    for e in entries:
        report = validate(e.space)
        if not report.ok:  # pragma: no cover - guards the generator itself
            raise AssertionError(f"corpus entry {e.name} is invalid:\n{report}")
    return entries


def realizable(entries: list[Entry]) -> list[Entry]:
    return [e for e in entries if e.term is not None]
