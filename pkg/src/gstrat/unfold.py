"""Elementary unfoldings as poset transformations, and their iteration.

An elementary unfolding removes the closed (minimal) strata: every other
stratum R survives as one stratum R^ with the same dimension, isotropy and
link, while a stratum that is both minimal and maximal (an isolated regular
piece) has nothing glued to it and so comes out twice, as ``S+`` and ``S-``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import Subgroup
from .iso import SpaceIso, is_isomorphic
from .strat import (
    StratSpace,
    Stratum,
    depth,
    maximal_strata,
    minimal_strata,
    orbit_space,
    require_valid,
)


@dataclass(frozen=True)
class UnfoldStep:
    source: StratSpace
    result: StratSpace
    provenance: dict[str, str] = field(hash=False)  # result id -> source id
    duplicated: frozenset = frozenset()


@dataclass(frozen=True)
class UnfoldChain:
    source: StratSpace
    steps: tuple[UnfoldStep, ...]
    total_provenance: dict[str, str] = field(hash=False)  # final id -> original id

    @property
    def result(self) -> StratSpace:
        return self.steps[-1].result if self.steps else self.source


def elementary_unfold(X: StratSpace) -> UnfoldStep:
    require_valid(X, "space for unfolding")
    minimal = minimal_strata(X)
    isolated = minimal & maximal_strata(X)
    taken = set(X.ids)
    strata: list[Stratum] = []
    provenance: dict[str, str] = {}
    for s in X.strata:
        if s.id in isolated:
            for sign in "+-":
                new_id = _fresh(s.id + sign, taken)
                strata.append(Stratum(new_id, s.dim, s.isotropy))
                provenance[new_id] = s.id
        elif s.id not in minimal:
            strata.append(s)
            provenance[s.id] = s.id
    order = frozenset((a, b) for a, b in X.order if a not in minimal)
    result = StratSpace(X.top, X.acting, tuple(strata), order, X.compact)
    return UnfoldStep(X, result, provenance, frozenset(isolated))


def _fresh(candidate: str, taken: set) -> str:
    new_id, k = candidate, 1
    while new_id in taken:
        new_id = f"{candidate}{k}"
        k += 1
    taken.add(new_id)
    return new_id


def unfold_all(X: StratSpace) -> UnfoldChain:
    """Iterate elementary unfoldings depth(X) times, down to a manifold."""
    require_valid(X, "space for unfolding")
    steps = []
    current = X
    total = {sid: sid for sid in X.ids}
    for _ in range(depth(X)):
        step = elementary_unfold(current)
        steps.append(step)
        total = {new: total[old] for new, old in step.provenance.items()}
        current = step.result
    return UnfoldChain(X, tuple(steps), total)


def check_unfold_quotient_commutes(X: StratSpace, K: Subgroup) -> SpaceIso | None:
    """Witness that unfolding X/K agrees with (unfolded X)/K, or None."""
    quotient_then_unfold = elementary_unfold(orbit_space(X, K)[0]).result
    unfold_then_quotient = orbit_space(elementary_unfold(X).result, K)[0]
    return is_isomorphic(quotient_then_unfold, unfold_then_quotient)


def check_unfold_all_quotient_commutes(X: StratSpace, K: Subgroup) -> SpaceIso | None:
    """Full-chain version: unfold_all(X/K) against unfold_all(X)/K."""
    quotient_then_unfold = unfold_all(orbit_space(X, K)[0]).result
    unfold_then_quotient = orbit_space(unfold_all(X).result, K)[0]
    return is_isomorphic(quotient_then_unfold, unfold_then_quotient)
