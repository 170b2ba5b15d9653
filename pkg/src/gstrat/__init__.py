"""Equivariant stratified pseudomanifolds with finite abelian group actions.

Modules: `abelian` (finite abelian groups, subgroups, quotients), `strat`
(stratified spaces as labelled posets), `iso` (equivariant isomorphism),
`unfold` (elementary unfoldings), `model` (numeric realizations) and `cli`.
"""

from .abelian import FiniteAbelianGroup, Subgroup, quotient, subgroup_closure
from .errors import GStratError
from .strat import StratSpace, Stratum, cone, depth, orbit_space, product, validate
from .unfold import elementary_unfold, unfold_all

__all__ = [
    "FiniteAbelianGroup",
    "GStratError",
    "StratSpace",
    "Stratum",
    "Subgroup",
    "cone",
    "depth",
    "elementary_unfold",
    "orbit_space",
    "product",
    "quotient",
    "subgroup_closure",
    "unfold_all",
    "validate",
]
