"""Exact arithmetic for finite abelian groups Z_{n1} x ... x Z_{nk}.

Elements are plain residue tuples.  A subgroup is identified by its full,
lexicographically sorted element list, so two subgroups compare equal
regardless of the generators used to build them.  Smith normal form is only
needed to put quotients into invariant-factor form.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, lcm, prod
from typing import Iterable, Iterator, Sequence

from .errors import AmbientMismatchError, InvalidElementError, NotASubgroupError

GroupElement = tuple  # residue tuple, one entry per modulus
Matrix = list  # list of integer rows


@dataclass(frozen=True)
class FiniteAbelianGroup:
    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(n) for n in self.moduli)
        if not moduli:
            raise ValueError("a group needs at least one modulus; use Z_1 for the trivial group")
        if any(n < 1 for n in moduli):
            raise ValueError(f"moduli must be >= 1, got {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @classmethod
    def cyclic(cls, n: int) -> FiniteAbelianGroup:
        return cls((n,))

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def zero(self) -> GroupElement:
        return (0,) * self.rank

    def elements(self) -> Iterator[GroupElement]:
        """All elements in lexicographic order."""
        return itertools.product(*(range(n) for n in self.moduli))

    def contains(self, g) -> bool:
        try:
            self.check(g)
        except InvalidElementError:
            return False
        return True

    def check(self, g) -> GroupElement:
        g = tuple(g)
        if len(g) != self.rank:
            raise InvalidElementError(f"element {g} has arity {len(g)}, group {self} has rank {self.rank}")
        for a, n in zip(g, self.moduli):
            if not isinstance(a, int) or not 0 <= a < n:
                raise InvalidElementError(f"residue {a!r} of {g} out of range for modulus {n}")
        return g

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def neg(self, a: GroupElement) -> GroupElement:
        return tuple((-x) % n for x, n in zip(a, self.moduli))

    def scale(self, k: int, a: GroupElement) -> GroupElement:
        return tuple((k * x) % n for x, n in zip(a, self.moduli))

    def element_order(self, a: GroupElement) -> int:
        return lcm(*(n // gcd(x, n) for x, n in zip(a, self.moduli)))

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors d1 | d2 | ... with units dropped; (1,) for the trivial group."""
        _, d, _ = smith_normal_form([[n if i == j else 0 for j, n in enumerate(self.moduli)] for i in range(self.rank)])
        factors = tuple(d[i][i] for i in range(self.rank) if d[i][i] != 1)
        return factors or (1,)

    def is_isomorphic_to(self, other: FiniteAbelianGroup) -> bool:
        return self.invariant_factors == other.invariant_factors

    def full(self) -> Subgroup:
        gens = [tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank)]
        return subgroup_closure(self, [g for g in gens if self.element_order(g) > 1])

    def trivial(self) -> Subgroup:
        return subgroup_closure(self, [])

    def __str__(self):
        return " x ".join(f"Z{n}" for n in self.moduli)


@dataclass(frozen=True)
class Subgroup:
    ambient: FiniteAbelianGroup
    generators: tuple[GroupElement, ...] = field(compare=False)
    elements: tuple[GroupElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.element_set

    def __le__(self, other: Subgroup) -> bool:
        return self.ambient == other.ambient and self.element_set <= other.element_set

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def is_full(self) -> bool:
        return len(self.elements) == self.ambient.order

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        return invariant_factors_by_counting(self.elements, self.ambient)

    def __str__(self):
        if self.is_trivial():
            return "{0}"
        return "<" + ", ".join(_fmt_element(g) for g in self.generators) + ">"


def _fmt_element(g: GroupElement) -> str:
    return str(g[0]) if len(g) == 1 else "(" + ",".join(map(str, g)) + ")"


def subgroup_closure(G: FiniteAbelianGroup, gens: Iterable) -> Subgroup:
    """Smallest subgroup of G containing gens (breadth-first closure)."""
    gens = tuple(G.check(g) for g in gens)
    seen = {G.zero}
    queue = deque([G.zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.add(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    # closure under addition of finite-order elements already contains inverses
    return Subgroup(G, gens, tuple(sorted(seen)))


def _same_ambient(G: FiniteAbelianGroup, *subs: Subgroup):
    for s in subs:
        if s.ambient != G:
            raise AmbientMismatchError(f"subgroup of {s.ambient} used as a subgroup of {G}")


def join(G: FiniteAbelianGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    """A + B, the smallest subgroup containing both."""
    _same_ambient(G, A, B)
    elems = sorted({G.add(a, b) for a in A.elements for b in B.elements})
    return Subgroup(G, A.generators + B.generators, tuple(elems))


def intersect(G: FiniteAbelianGroup, A: Subgroup, B: Subgroup) -> Subgroup:
    _same_ambient(G, A, B)
    elems = tuple(g for g in A.elements if g in B.element_set)
    return Subgroup(G, elems, elems)


def invariant_factors_by_counting(elements: Sequence, G: FiniteAbelianGroup) -> tuple[int, ...]:
    """Invariant factors of the finite abelian group formed by `elements` inside G.

    Uses the fact that |{x : p^k x = 0}| determines the p-primary part.
    """
    n = len(elements)
    if n == 1:
        return (1,)
    elementary: list[list[int]] = []
    for p in _prime_factors(n):
        counts = [1]
        k = 1
        while counts[-1] < _p_part(n, p):
            pk = p**k
            counts.append(sum(1 for x in elements if G.scale(pk, x) == G.zero))
            k += 1
        logs = [_ilog(c, p) for c in counts]
        # number of cyclic p-factors of order >= p^k is logs[k] - logs[k-1]
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        powers = []
        for k, cnt in enumerate(at_least, start=1):
            nxt = at_least[k] if k < len(at_least) else 0
            powers += [p**k] * (cnt - nxt)
        elementary.append(sorted(powers, reverse=True))
    width = max(len(e) for e in elementary)
    factors = []
    for i in range(width):
        factors.append(prod(e[i] for e in elementary if i < len(e)))
    return tuple(sorted(factors))


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _ilog(c: int, p: int) -> int:
    k = 0
    while c > 1:
        c //= p
        k += 1
    return k


# ---------------------------------------------------------------- Smith form


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U @ M @ V == D.

    D is diagonal with non-negative entries d1 | d2 | ..., U and V are
    unimodular.  Pivot signs are fixed with column operations only, so a
    single-row input always gets U == [[1]].
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        for R in (A, U):
            R[dst] = [a + q * b for a, b in zip(R[dst], R[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for R in (A, V):
            for row in R:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            pivots = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not pivots:
                return U, A, V
            _, i, j = min(pivots)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if A[t][t] < 0:
            for R in (A, V):
                for row in R:
                    row[t] = -row[t]
    return U, A, V


# ---------------------------------------------------------------- quotients


@dataclass(frozen=True)
class QuotientPresentation:
    """G/K in invariant-factor form together with the projection G -> G/K.

    The projection is g -> (U g)_i mod d_i over the kept rows i, where U comes
    from the Smith form of the relation matrix [diag(moduli) | K generators].
    """

    source: FiniteAbelianGroup
    kernel: Subgroup
    target: FiniteAbelianGroup
    rows: tuple[tuple[int, ...], ...]  # rows of U kept for the target coordinates

    def project(self, g) -> GroupElement:
        g = self.source.check(g)
        if not self.rows:
            return (0,)
        return tuple(sum(u * x for u, x in zip(row, g)) % d for row, d in zip(self.rows, self.target.moduli))

    __call__ = project

    @cached_property
    def table(self) -> dict:
        """The projection as an explicit element map."""
        return {g: self.project(g) for g in self.source.elements()}


def quotient(G: FiniteAbelianGroup, K: Subgroup) -> QuotientPresentation:
    if K.ambient != G:
        raise NotASubgroupError(f"{K} is not a subgroup of {G}")
    k = G.rank
    gens = list(K.generators) or [G.zero]
    relations = [[G.moduli[i] if i == j else 0 for j in range(k)] + [g[i] for g in gens] for i in range(k)]
    U, D, _ = smith_normal_form(relations)
    kept = [(tuple(U[i]), D[i][i]) for i in range(k) if D[i][i] != 1]
    if not kept:
        return QuotientPresentation(G, K, FiniteAbelianGroup((1,)), ())
    rows, moduli = zip(*kept)
    return QuotientPresentation(G, K, FiniteAbelianGroup(moduli), rows)


def push_subgroup(q: QuotientPresentation, H: Subgroup) -> Subgroup:
    """Image of H in G/K, i.e. KH/K."""
    if H.ambient != q.source:
        raise NotASubgroupError(f"{H} does not live in {q.source}")
    return subgroup_closure(q.target, sorted({q.project(h) for h in H.generators}))


def all_subgroups(G: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup of G, found by closing the trivial group under joins with cyclic subgroups."""
    trivial = G.trivial()
    found = {trivial.elements: trivial}
    frontier = [trivial]
    everything = list(G.elements())
    while frontier:
        nxt = []
        for s in frontier:
            covered = set(s.element_set)
            for g in everything:
                if g in covered:
                    continue
                # s + <g> only depends on the coset g + s
                covered.update(G.add(g, h) for h in s.elements)
                j = _join_cyclic(G, s, g)
                if j.elements not in found:
                    found[j.elements] = j
                    nxt.append(j)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (s.order, s.elements))


def _join_cyclic(G: FiniteAbelianGroup, s: Subgroup, g: GroupElement) -> Subgroup:
    elems = set(s.elements)
    shift = g
    while shift not in s.element_set:
        elems.update(G.add(shift, h) for h in s.elements)
        shift = G.add(shift, g)
    return Subgroup(G, s.generators + (g,), tuple(sorted(elems)))


def abelian_groups_up_to(n: int) -> list[FiniteAbelianGroup]:
    """One group per isomorphism class of order <= n, in invariant-factor form."""
    out = []
    for order in range(1, n + 1):
        for factors in _invariant_factor_shapes(order):
            out.append(FiniteAbelianGroup(factors or (1,)))
    return out


def _invariant_factor_shapes(order: int, prev: int = 1) -> list[tuple[int, ...]]:
    # sequences prev | d1 | d2 | ... with product == order, all d_i > 1
    if order == 1:
        return [()]
    shapes = []
    for d in range(2, order + 1):
        if order % d == 0 and d % prev == 0:
            shapes += [(d,) + tail for tail in _invariant_factor_shapes(order // d, d)]
    return shapes
