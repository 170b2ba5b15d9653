"""Combinatorial model of G-stratified pseudomanifolds.

A space is a finite poset of strata.  Each stratum carries a dimension, an
isotropy subgroup and, when it is singular, a link space plus an attach map
saying which stratum above it each link stratum sweeps out.  Every isotropy
label, at every nesting level, is a subgroup of the same top group.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping

from .abelian import (
    FiniteAbelianGroup,
    Subgroup,
    join,
    push_subgroup,
    quotient,
)
from .errors import ConstructionError, InvalidSpaceError, NotASubgroupError


@dataclass(frozen=True)
class Stratum:
    id: str
    dim: int
    isotropy: Subgroup
    link: StratSpace | None = None
    attach: Mapping[str, str] | None = field(default=None, hash=False)

    @property
    def singular(self) -> bool:
        return self.link is not None


@dataclass(frozen=True)
class StratSpace:
    top: FiniteAbelianGroup
    acting: Subgroup
    strata: tuple[Stratum, ...]
    order: frozenset = frozenset()  # pairs (lower, upper)
    compact: bool = False

    @property
    def group(self) -> Subgroup:
        return self.acting

    @cached_property
    def by_id(self) -> dict[str, Stratum]:
        return {s.id: s for s in self.strata}

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.strata]

    def __getitem__(self, sid: str) -> Stratum:
        return self.by_id[sid]

    def less(self, a: str, b: str) -> bool:
        return (a, b) in self.order

    @cached_property
    def _above(self) -> dict[str, frozenset]:
        up: dict[str, set] = {s.id: set() for s in self.strata}
        for a, b in self.order:
            up.setdefault(a, set()).add(b)
        return {k: frozenset(v) for k, v in up.items()}

    @cached_property
    def _below(self) -> dict[str, frozenset]:
        down: dict[str, set] = {s.id: set() for s in self.strata}
        for a, b in self.order:
            down.setdefault(b, set()).add(a)
        return {k: frozenset(v) for k, v in down.items()}

    def above(self, sid: str) -> frozenset:
        return self._above.get(sid, frozenset())

    def below(self, sid: str) -> frozenset:
        return self._below.get(sid, frozenset())

    def __str__(self):
        return format_space(self)


# ---------------------------------------------------------------- poset queries


def minimal_strata(X: StratSpace) -> set[str]:
    return {s.id for s in X.strata if not X.below(s.id)}


def maximal_strata(X: StratSpace) -> set[str]:
    return {s.id for s in X.strata if not X.above(s.id)}


def hasse_edges(X: StratSpace) -> list[tuple[str, str]]:
    """Covering pairs a < b with nothing strictly between, in stratum order."""
    pos = {sid: i for i, sid in enumerate(X.ids)}
    edges = []
    for a, b in X.order:
        if not any(X.less(a, c) and X.less(c, b) for c in X.above(a)):
            edges.append((a, b))
    return sorted(edges, key=lambda e: (pos.get(e[0], -1), pos.get(e[1], -1), e))


def _longest_up(X: StratSpace) -> dict[str, int]:
    memo: dict[str, int] = {}

    def up(sid, stack=()):
        if sid in memo:
            return memo[sid]
        if sid in stack:
            raise InvalidSpaceError(f"order has a cycle through {sid!r}")
        best = 0
        for r in X.above(sid):
            best = max(best, 1 + up(r, stack + (sid,)))
        memo[sid] = best
        return best

    for s in X.strata:
        up(s.id)
    return memo


def depth_above(X: StratSpace, sid: str) -> int:
    """Longest chain S < R1 < ... < Rm starting at sid."""
    return _longest_up(X)[sid]


def height(X: StratSpace, sid: str) -> int:
    """Longest chain strictly below sid."""
    memo: dict[str, int] = {}

    def down(s):
        if s not in memo:
            memo[s] = max((1 + down(r) for r in X.below(s)), default=0)
        return memo[s]

    return down(sid)


def depth(X: StratSpace) -> int:
    if not X.strata:
        return 0
    return max(_longest_up(X).values())


# ---------------------------------------------------------------- primitives


def _trivial_group() -> FiniteAbelianGroup:
    return FiniteAbelianGroup((1,))


def manifold(dim: int, group: FiniteAbelianGroup | None = None, compact: bool = False, sid: str = "e") -> StratSpace:
    """A connected manifold with a free action of `group` (trivial group by default)."""
    if dim < 0:
        raise ConstructionError(f"negative dimension {dim}")
    G = group or _trivial_group()
    return StratSpace(G, G.full(), (Stratum(sid, dim, G.trivial()),), frozenset(), compact)


def point() -> StratSpace:
    return manifold(0, compact=True)


def circle(m: int) -> StratSpace:
    """Unit circle with Z_m acting by rotation (free)."""
    if m < 1:
        raise ConstructionError(f"circle needs m >= 1, got {m}")
    return manifold(1, FiniteAbelianGroup((m,)), compact=True, sid="o")


def rot_sphere(m: int) -> StratSpace:
    """Unit 2-sphere, Z_m rotating about the polar axis; poles N, S fixed, free part T."""
    L = circle(m)
    G = L.top
    full = G.full()
    link_attach = {"o": "T"}
    strata = (
        Stratum("N", 0, full, L, dict(link_attach)),
        Stratum("S", 0, full, L, dict(link_attach)),
        Stratum("T", 2, G.trivial()),
    )
    return StratSpace(G, full, strata, frozenset({("N", "T"), ("S", "T")}), True)


def suspension(L: StratSpace) -> StratSpace:
    """Two cone points N, S over a compact L, joined by L x (-1, 1)."""
    if not L.compact:
        raise ConstructionError("suspension needs a compact space")
    cyl = {s.id: "s" + s.id for s in L.strata}
    strata = [
        Stratum("N", 0, L.acting, L, dict(cyl)),
        Stratum("S", 0, L.acting, L, dict(cyl)),
    ]
    strata += [_cylinder(s, cyl) for s in L.strata]
    order = {(p, c) for p in ("N", "S") for c in cyl.values()}
    order |= {(cyl[a], cyl[b]) for a, b in L.order}
    return StratSpace(L.top, L.acting, tuple(strata), frozenset(order), True)


def _cylinder(s: Stratum, rename: Mapping[str, str]) -> Stratum:
    attach = None if s.attach is None else {k: rename[v] for k, v in s.attach.items()}
    return Stratum(rename[s.id], s.dim + 1, s.isotropy, s.link, attach)


# ---------------------------------------------------------------- constructors


def cone(L: StratSpace) -> StratSpace:
    """Open cone: vertex v below every cylinder cS = S x (0, inf)."""
    if not L.compact:
        raise ConstructionError("cone over a non-compact space")
    cyl = {s.id: "c" + s.id for s in L.strata}
    vertex = Stratum("v", 0, L.acting, L, dict(cyl))
    strata = (vertex,) + tuple(_cylinder(s, cyl) for s in L.strata)
    order = {("v", c) for c in cyl.values()} | {(cyl[a], cyl[b]) for a, b in L.order}
    return StratSpace(L.top, L.acting, strata, frozenset(order), False)


def product(m_dim: int, X: StratSpace) -> StratSpace:
    """M x X for a connected manifold M of dimension m_dim with trivial action."""
    if m_dim < 0:
        raise ConstructionError(f"negative manifold dimension {m_dim}")
    if m_dim == 0:
        return X
    strata = tuple(replace(s, dim=s.dim + m_dim) for s in X.strata)
    return StratSpace(X.top, X.acting, strata, X.order, False)


def orbit_space(X: StratSpace, K: Subgroup) -> tuple[StratSpace, dict[str, str]]:
    """X/K as a G/K-space, plus the stratum bijection S -> pi(S).

    Stratum labels G_S become KG_S/K.  A link L_S becomes L_S/(G_S cap K); since
    the kernel of G_S -> G/K is exactly G_S cap K, pushing the link's labels
    through the same projection expresses that quotient directly in G/K.
    """
    if K.ambient != X.top or not K <= X.acting:
        raise NotASubgroupError(f"{K} is not a subgroup of the acting group {X.acting}")
    q = quotient(X.top, K)
    Y = _push_space(X, q, K)
    return Y, {s.id: s.id for s in X.strata}


def _push_space(X: StratSpace, q, K: Subgroup) -> StratSpace:
    strata = []
    for s in X.strata:
        link = None
        if s.link is not None:
            link = _push_space(s.link, q, K)
        label = push_subgroup(q, join(X.top, K, s.isotropy))
        strata.append(Stratum(s.id, s.dim, label, link, None if s.attach is None else dict(s.attach)))
    return StratSpace(q.target, push_subgroup(q, X.acting), tuple(strata), X.order, X.compact)


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    stratum: str | None
    kind: str
    message: str

    def __str__(self):
        where = self.stratum if self.stratum is not None else "-"
        return f"{where}: {self.kind}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, stratum, kind, message):
        self.violations.append(Violation(stratum, kind, message))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(f"invalid: {v}" for v in self.violations)


def validate(X: StratSpace, top: FiniteAbelianGroup | None = None) -> ValidationReport:
    """Check every structural invariant; violations name the offending stratum.

    Link spaces are checked recursively and their violations are reported
    with a path prefix like ``v/o``.
    """
    report = ValidationReport()
    _validate_into(X, report, "", top or X.top)
    return report


def _validate_into(X: StratSpace, report: ValidationReport, prefix: str, top: FiniteAbelianGroup):
    def add(sid, kind, msg):
        where = prefix + sid if sid is not None else prefix.rstrip("/") or None
        report.add(where, kind, msg)

    if X.top != top:
        add(None, "top-group", f"space uses top group {X.top}, expected {top}")
        return
    if X.acting.ambient != X.top:
        add(None, "acting-group", "acting group does not live in the top group")
        return

    ids = [s.id for s in X.strata]
    seen = set()
    for sid in ids:
        if sid in seen:
            add(sid, "duplicate-id", f"stratum id {sid!r} used twice")
        seen.add(sid)
    known = set(ids)

    order_ok = True
    for a, b in X.order:
        if a not in known or b not in known:
            add(a if a not in known else b, "dangling-order", f"order pair ({a}, {b}) names an unknown stratum")
            order_ok = False
    if order_ok:
        for a, b in X.order:
            if a == b:
                add(a, "order-reflexive", f"{a} < {a}")
                order_ok = False
            elif (b, a) in X.order:
                add(a, "order-antisymmetry", f"{a} < {b} and {b} < {a}")
                order_ok = False
        for a, b in X.order:
            for c in X.above(b):
                if (a, c) not in X.order and a != c:
                    add(a, "order-transitivity", f"{a} < {b} < {c} but not {a} < {c}")
                    order_ok = False

    for s in X.strata:
        if s.dim < 0:
            add(s.id, "dimension", f"negative dimension {s.dim}")
        if s.isotropy.ambient != X.top or not s.isotropy <= X.acting:
            add(s.id, "isotropy", f"isotropy {s.isotropy} is not a subgroup of the acting group")

    if not order_ok:
        return

    for s in X.strata:
        above = X.above(s.id)
        if not above:
            if s.link is not None or s.attach is not None:
                add(s.id, "unexpected-link", "maximal stratum carries a link or attach map")
            continue
        if s.link is None:
            add(s.id, "missing-link", "missing link: singular stratum has no link")
            continue
        if s.attach is None:
            add(s.id, "missing-attach", "singular stratum has no attach map")
            continue
        L = s.link
        if not L.compact:
            add(s.id, "link-noncompact", "link is not compact")
        if L.acting != s.isotropy:
            add(s.id, "link-group", f"link acted on by {L.acting}, stratum isotropy is {s.isotropy}")
        _validate_into(L, report, f"{prefix}{s.id}/", top)
        link_ids = {t.id for t in L.strata}
        for lid, target in s.attach.items():
            if lid not in link_ids:
                add(s.id, "dangling-attach", f"attach maps unknown link stratum {lid!r}")
            elif target not in known:
                add(s.id, "dangling-attach", f"attach targets unknown stratum {target!r}")
            elif target not in above:
                add(s.id, "attach-not-above", f"link stratum {lid} attaches to {target}, which is not above {s.id}")
        missing_src = link_ids - set(s.attach)
        if missing_src:
            add(s.id, "attach-partial", f"link strata {sorted(missing_src)} have no attach target")
        good = {k: v for k, v in s.attach.items() if k in link_ids and v in above}
        if set(good.values()) != set(above):
            add(s.id, "attach-surjective", f"strata {sorted(set(above) - set(good.values()))} are not swept by the link")
        for a, b in L.order:
            if a in good and b in good and not X.less(good[a], good[b]):
                add(s.id, "attach-monotone", f"link {a} < {b} but {good[a]} is not below {good[b]}")
        for lid, target in good.items():
            ls, r = L[lid], X[target]
            if r.dim != s.dim + 1 + ls.dim:
                add(s.id, "dimension", f"link stratum {lid} (dim {ls.dim}) attaches to {target} of dim {r.dim}, expected {s.dim + 1 + ls.dim}")
            if ls.isotropy != r.isotropy:
                add(s.id, "link-isotropy", f"link stratum {lid} has isotropy {ls.isotropy}, {target} has {r.isotropy}")
        try:
            if depth_above(X, s.id) != depth(L) + 1:
                add(s.id, "link-depth", f"depth above {s.id} is {depth_above(X, s.id)}, link depth is {depth(L)}")
        except InvalidSpaceError as exc:
            add(s.id, "link-depth", str(exc))


def require_valid(X: StratSpace, what: str = "space") -> None:
    report = validate(X)
    if not report.ok:
        raise InvalidSpaceError(f"invalid {what}:\n{report}", report)


# ---------------------------------------------------------------- display


def group_label(H: Subgroup) -> str:
    """Isomorphism type of H, e.g. 'Z2xZ4' or '1'."""
    f = H.invariant_factors
    return "1" if f == (1,) else "x".join(f"Z{d}" for d in f)


def format_space(X: StratSpace, indent: str = "") -> str:
    lines = [f"{indent}space over {X.top} (acting {group_label(X.acting)}), depth {depth(X)}, "
             f"{'compact' if X.compact else 'non-compact'}"]
    for s in X.strata:
        above = sorted(X.above(s.id), key=X.ids.index)
        line = f"{indent}  {s.id}: dim {s.dim}, isotropy {group_label(s.isotropy)}"
        if above:
            line += f", below {', '.join(above)}"
        lines.append(line)
        if s.link is not None:
            lines.append(f"{indent}    link:")
            lines.append(format_space(s.link, indent + "      "))
    return "\n".join(lines)


def relabel(X: StratSpace, rename: Mapping[str, str]) -> StratSpace:
    """Rename strata ids (attach targets follow; link internals untouched)."""
    strata = []
    for s in X.strata:
        attach = None if s.attach is None else {k: rename.get(v, v) for k, v in s.attach.items()}
        strata.append(Stratum(rename.get(s.id, s.id), s.dim, s.isotropy, s.link, attach))
    order = frozenset((rename.get(a, a), rename.get(b, b)) for a, b in X.order)
    return StratSpace(X.top, X.acting, tuple(strata), order, X.compact)
