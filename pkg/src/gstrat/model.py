"""Numeric realizations of model G-pseudomanifolds.

Spaces are grammar terms built from three primitives (Euclidean space with
the trivial action, the unit circle with Z_m rotating it, the unit 2-sphere
with Z_m rotating about the polar axis) closed under cones over compact
terms and products with Euclidean factors.  Points are coordinate trees that
mirror the term:

    Euclidean(k)  ->  tuple of k floats
    Circle(m)     ->  angle in [0, 2pi)
    RotSphere(m)  ->  (longitude, colatitude)
    Cone(inner)   ->  (inner point, r) with r >= 0
    Product(...)  ->  tuple of factor points

Canonical form collapses a cone point with r == 0 to (basepoint, 0.0) and
sets the longitude of a pole to 0.0, so equal points have equal coordinates.

Every singular stratum gets a tube.  A cone vertex uses the cone radius as
its radium; a pole of a rotation sphere uses the colatitude distance to the
pole.  Pole charts only reach up to the opposite pole, so the radial action
there is partial: scaling past colatitude pi raises ModelError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

import numpy as np
from scipy.stats import qmc

from . import strat
from .abelian import FiniteAbelianGroup, Subgroup
from .errors import ModelError
from .strat import StratSpace

TAU = 2 * math.pi
CANONICAL_TOL = 1e-12
DEFAULT_EPSILON = 0.5


@dataclass(frozen=True)
class Euclidean:
    k: int


@dataclass(frozen=True)
class Circle:
    m: int


@dataclass(frozen=True)
class RotSphere:
    m: int


@dataclass(frozen=True)
class Cone:
    inner: Node


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __init__(self, *factors):
        if len(factors) == 1 and isinstance(factors[0], (tuple, list)):
            factors = tuple(factors[0])
        object.__setattr__(self, "factors", tuple(factors))


Node = Union[Euclidean, Circle, RotSphere, Cone, Product]


# ---------------------------------------------------------------- term structure


def _moving_factor(node: Product) -> int | None:
    """Index of the single non-Euclidean factor, if any."""
    moving = [i for i, f in enumerate(node.factors) if not isinstance(f, Euclidean)]
    if len(moving) > 1:
        raise ModelError("a product may have at most one non-Euclidean factor")
    return moving[0] if moving else None


def check_term(node: Node) -> None:
    if isinstance(node, Euclidean):
        if node.k < 0:
            raise ModelError(f"Euclidean dimension must be >= 0, got {node.k}")
    elif isinstance(node, (Circle, RotSphere)):
        if node.m < 1:
            raise ModelError(f"{type(node).__name__} needs m >= 1, got {node.m}")
    elif isinstance(node, Cone):
        check_term(node.inner)
        if not is_compact(node.inner):
            raise ModelError(f"cone over non-compact term {node.inner}")
    elif isinstance(node, Product):
        if not node.factors:
            raise ModelError("empty product")
        for f in node.factors:
            check_term(f)
        _moving_factor(node)
    else:
        raise ModelError(f"not a grammar term: {node!r}")


def is_compact(node: Node) -> bool:
    if isinstance(node, Euclidean):
        return node.k == 0
    if isinstance(node, (Circle, RotSphere)):
        return True
    if isinstance(node, Cone):
        return False
    return all(is_compact(f) for f in node.factors)


def group_of(node: Node) -> FiniteAbelianGroup:
    if isinstance(node, (Circle, RotSphere)):
        return FiniteAbelianGroup((node.m,))
    if isinstance(node, Cone):
        return group_of(node.inner)
    if isinstance(node, Product):
        i = _moving_factor(node)
        if i is not None:
            return group_of(node.factors[i])
    return FiniteAbelianGroup((1,))


def skeleton(node: Node) -> StratSpace:
    """The symbolic stratified space the term realizes."""
    if isinstance(node, Euclidean):
        return strat.manifold(node.k, compact=node.k == 0)
    if isinstance(node, Circle):
        return strat.circle(node.m)
    if isinstance(node, RotSphere):
        return strat.rot_sphere(node.m)
    if isinstance(node, Cone):
        return strat.cone(skeleton(node.inner))
    i = _moving_factor(node)
    flat = sum(f.k for f in node.factors if isinstance(f, Euclidean))
    if i is None:
        return strat.manifold(flat, compact=flat == 0)
    inner = skeleton(node.factors[i])
    return strat.product(flat, inner)


def quotient_term(node: Node, d: int) -> Node:
    """The term for the orbit space by the order-d subgroup of the cyclic acting group."""
    if isinstance(node, (Circle, RotSphere)):
        if node.m % d:
            raise ModelError(f"Z{node.m} has no subgroup of order {d}")
        return type(node)(node.m // d)
    if isinstance(node, Cone):
        return Cone(quotient_term(node.inner, d))
    if isinstance(node, Product):
        return Product(tuple(quotient_term(f, d) for f in node.factors))
    return node


# ---------------------------------------------------------------- points


def basepoint(node: Node):
    if isinstance(node, Euclidean):
        return (0.0,) * node.k
    if isinstance(node, Circle):
        return 0.0
    if isinstance(node, RotSphere):
        return (0.0, 0.0)
    if isinstance(node, Cone):
        return (basepoint(node.inner), 0.0)
    return tuple(basepoint(f) for f in node.factors)


def _angle(theta: float) -> float:
    a = math.fmod(float(theta), TAU)
    if a < 0:
        a += TAU
    if a >= TAU - CANONICAL_TOL:
        a = 0.0
    return a


def canonical(node: Node, x):
    """Canonical coordinates for x; raises ModelError for malformed points."""
    try:
        if isinstance(node, Euclidean):
            x = tuple(float(c) for c in x)
            if len(x) != node.k:
                raise ModelError(f"expected {node.k} Euclidean coordinates, got {len(x)}")
            return x
        if isinstance(node, Circle):
            return _angle(x)
        if isinstance(node, RotSphere):
            lon, colat = (float(c) for c in x)
            if colat < -CANONICAL_TOL or colat > math.pi + CANONICAL_TOL:
                raise ModelError(f"colatitude {colat} outside [0, pi]")
            colat = min(max(colat, 0.0), math.pi)
            if colat == 0.0 or colat == math.pi:
                return (0.0, colat)
            return (_angle(lon), colat)
        if isinstance(node, Cone):
            inner, r = x
            r = float(r)
            if r < 0:
                raise ModelError(f"negative cone radius {r}")
            if r == 0.0:
                return (basepoint(node.inner), 0.0)
            return (canonical(node.inner, inner), r)
        if len(x) != len(node.factors):
            raise ModelError(f"expected {len(node.factors)} product factors, got {len(x)}")
        return tuple(canonical(f, c) for f, c in zip(node.factors, x))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"malformed point {x!r} for {node}: {exc}") from exc


def distance(node: Node, x, y) -> float:
    """Sup-norm coordinate distance, angles measured around the circle."""
    if isinstance(node, Euclidean):
        return max((abs(a - b) for a, b in zip(x, y)), default=0.0)
    if isinstance(node, Circle):
        return _arc(x, y)
    if isinstance(node, RotSphere):
        return max(abs(a - b) for a, b in zip(_embed(x), _embed(y)))
    if isinstance(node, Cone):
        if x[1] == 0.0 or y[1] == 0.0:
            return abs(x[1] - y[1])
        return max(distance(node.inner, x[0], y[0]), abs(x[1] - y[1]))
    return max((distance(f, a, b) for f, a, b in zip(node.factors, x, y)), default=0.0)


def _embed(p) -> tuple[float, float, float]:
    lon, colat = p
    return (math.sin(colat) * math.cos(lon), math.sin(colat) * math.sin(lon), math.cos(colat))


def _arc(a: float, b: float) -> float:
    d = abs(a - b) % TAU
    return min(d, TAU - d)


def locate(node: Node, x) -> str:
    """Id of the skeleton stratum containing x."""
    if isinstance(node, Euclidean):
        return "e"
    if isinstance(node, Circle):
        return "o"
    if isinstance(node, RotSphere):
        if x[1] == 0.0:
            return "N"
        if x[1] == math.pi:
            return "S"
        return "T"
    if isinstance(node, Cone):
        return "v" if x[1] == 0.0 else "c" + locate(node.inner, x[0])
    i = _moving_factor(node)
    return "e" if i is None else locate(node.factors[i], x[i])


def _act(node: Node, k: int, x):
    if isinstance(node, Circle):
        return _angle(x + TAU * k / node.m)
    if isinstance(node, RotSphere):
        if x[1] in (0.0, math.pi):
            return x
        return (_angle(x[0] + TAU * k / node.m), x[1])
    if isinstance(node, Cone):
        if x[1] == 0.0:
            return x
        return (_act(node.inner, k, x[0]), x[1])
    if isinstance(node, Product):
        return tuple(_act(f, k, c) for f, c in zip(node.factors, x))
    return x


def _orbit(node: Node, d: int, x):
    if isinstance(node, Circle):
        # pick the orbit point in [0, 2pi/d), then stretch that sector to the full circle
        return _angle(math.fmod(x, TAU / d) * d)
    if isinstance(node, RotSphere):
        if x[1] in (0.0, math.pi):
            return x
        return (_angle(math.fmod(x[0], TAU / d) * d), x[1])
    if isinstance(node, Cone):
        if x[1] == 0.0:
            return x
        return (_orbit(node.inner, d, x[0]), x[1])
    if isinstance(node, Product):
        return tuple(_orbit(f, d, c) for f, c in zip(node.factors, x))
    return x


def coordinate_count(node: Node) -> int:
    if isinstance(node, Euclidean):
        return node.k
    if isinstance(node, Circle):
        return 1
    if isinstance(node, RotSphere):
        return 2
    if isinstance(node, Cone):
        return coordinate_count(node.inner) + 1
    return sum(coordinate_count(f) for f in node.factors)


def _from_unit(node: Node, u: list, cone_radius: float):
    """Consume unit-interval samples from u and build a point."""
    if isinstance(node, Euclidean):
        return tuple(4.0 * u.pop() - 2.0 for _ in range(node.k))
    if isinstance(node, Circle):
        return TAU * u.pop()
    if isinstance(node, RotSphere):
        return (TAU * u.pop(), math.pi * u.pop())
    if isinstance(node, Cone):
        inner = _from_unit(node.inner, u, cone_radius)
        return (inner, cone_radius * u.pop())
    return tuple(_from_unit(f, u, cone_radius) for f in node.factors)


# ---------------------------------------------------------------- tubes


@dataclass(frozen=True)
class Tube:
    """Tube {x : radium < epsilon} around a singular stratum.

    `path` addresses the coordinate node carrying the transverse cone: a Cone
    node for a vertex, a RotSphere node for a pole (`pole` is +1 for N, -1
    for S).
    """

    stratum: str
    epsilon: float
    kind: str
    path: tuple[int, ...]
    pole: int = 0


def _tubes(node: Node, epsilon: float) -> dict[str, Tube]:
    if isinstance(node, RotSphere):
        return {"N": Tube("N", epsilon, "pole", (), 1), "S": Tube("S", epsilon, "pole", (), -1)}
    if isinstance(node, Cone):
        out = {"v": Tube("v", epsilon, "vertex", ())}
        for sid, t in _tubes(node.inner, epsilon).items():
            out["c" + sid] = replace(t, stratum="c" + sid, path=(0,) + t.path)
        return out
    if isinstance(node, Product):
        i = _moving_factor(node)
        if i is None:
            return {}
        return {sid: replace(t, path=(i,) + t.path) for sid, t in _tubes(node.factors[i], epsilon).items()}
    return {}


def _get(node: Node, x, path):
    """Node and sub-point at path; raises ModelError when a cone on the way is at its vertex."""
    for step in path:
        if isinstance(node, Cone):
            if x[1] == 0.0:
                raise ModelError("point is a cone vertex, outside this tube's chart")
            node, x = node.inner, x[0]
        else:
            node, x = node.factors[step], x[step]
    return node, x


def _set(node: Node, x, path, value):
    if not path:
        return value
    step, rest = path[0], path[1:]
    if isinstance(node, Cone):
        return (_set(node.inner, x[0], rest, value), x[1])
    parts = list(x)
    parts[step] = _set(node.factors[step], x[step], rest, value)
    return tuple(parts)


@dataclass(frozen=True)
class RealizedSpace:
    expr: Node
    skeleton: StratSpace
    tubes: dict = field(hash=False)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.skeleton.top

    def canonical(self, x):
        return canonical(self.expr, x)

    def locate(self, x) -> str:
        return locate(self.expr, self.canonical(x))

    def close(self, x, y, tol: float = 1e-9) -> bool:
        return distance(self.expr, self.canonical(x), self.canonical(y)) <= tol

    def basepoint(self):
        return basepoint(self.expr)

    def with_epsilon(self, eps: dict[str, float]) -> RealizedSpace:
        tubes = dict(self.tubes)
        for sid, e in eps.items():
            if sid not in tubes:
                raise ModelError(f"no tube for stratum {sid!r}")
            if e <= 0:
                raise ModelError(f"tube radius must be positive, got {e}")
            tubes[sid] = replace(tubes[sid], epsilon=float(e))
        return replace(self, tubes=tubes)

    # -- group action

    def act(self, g, x):
        g = tuple(g)
        if not self.group.contains(g):
            raise ModelError(f"{g} is not an element of {self.group}")
        return _act(self.expr, g[0], self.canonical(x))

    def orbit_point(self, x, K: Subgroup):
        """Canonical representative of the K-orbit of x, as a point of quotient(K)."""
        self._check_subgroup(K)
        return canonical(quotient_term(self.expr, K.order), _orbit(self.expr, K.order, self.canonical(x)))

    def quotient(self, K: Subgroup) -> RealizedSpace:
        self._check_subgroup(K)
        q = realize(quotient_term(self.expr, K.order))
        return q.with_epsilon({sid: t.epsilon for sid, t in self.tubes.items()})

    def _check_subgroup(self, K: Subgroup):
        if K.ambient != self.group:
            raise ModelError(f"{K} is not a subgroup of {self.group}")

    # -- tubes

    def tube(self, S: str) -> Tube:
        try:
            return self.tubes[S]
        except KeyError:
            raise ModelError(f"stratum {S!r} is not singular (no tube)") from None

    def radium(self, S: str, x) -> float:
        t = self.tube(S)
        node, p = _get(self.expr, self.canonical(x), t.path)
        if t.kind == "vertex":
            return p[1]
        rho = p[1] if t.pole > 0 else math.pi - p[1]
        if rho >= math.pi:
            raise ModelError("point is the opposite pole, outside this tube's chart")
        return rho

    def in_tube(self, S: str, x) -> bool:
        try:
            return self.radium(S, x) < self.tube(S).epsilon
        except ModelError:
            return False

    def project(self, S: str, x):
        """tau_S: collapse the transverse radius to 0."""
        t = self.tube(S)
        x = self.canonical(x)
        node, p = _get(self.expr, x, t.path)
        if t.kind == "vertex":
            new = (basepoint(node.inner), 0.0)
        else:
            new = (0.0, 0.0 if t.pole > 0 else math.pi)
        return _set(self.expr, x, t.path, new)

    def radial(self, r: float, x, S: str):
        """delta_S(r, x): scale the transverse radius by r."""
        if not r > 0:
            raise ModelError(f"radial action needs r > 0, got {r}")
        t = self.tube(S)
        x = self.canonical(x)
        node, p = _get(self.expr, x, t.path)
        rho = self.radium(S, x)
        new_rho = r * rho
        if t.kind == "vertex":
            new = (p[0], new_rho) if rho > 0 else p
        else:
            if new_rho >= math.pi:
                raise ModelError(f"radial action leaves the pole chart (radius {new_rho} >= pi)")
            new = (p[0], new_rho if t.pole > 0 else math.pi - new_rho)
        return canonical(self.expr, _set(self.expr, x, t.path, new))

    def chart(self, S: str, base, link_point, r: float):
        """phi(u, [l, r]) with u given as the point `base` of S."""
        t = self.tube(S)
        base = self.canonical(base)
        if abs(self.radium(S, base)) > 0:
            raise ModelError("chart base point is not on the stratum")
        node, _ = _get(self.expr, base, t.path)
        if t.kind == "vertex":
            new = (link_point, r)
        else:
            if r >= math.pi:
                raise ModelError(f"pole chart radius {r} >= pi")
            new = (link_point, r if t.pole > 0 else math.pi - r)
        return canonical(self.expr, _set(self.expr, base, t.path, new))

    def link_coordinate(self, S: str, x):
        """The link component z of x in the tube chart phi(u, [z, r])."""
        t = self.tube(S)
        _, p = _get(self.expr, self.canonical(x), t.path)
        self.radium(S, x)  # rejects the opposite pole
        return p[0]

    def link_term(self, S: str) -> Node:
        t = self.tube(S)
        node = self._node_at(t.path)
        return node.inner if t.kind == "vertex" else Circle(node.m)

    def _node_at(self, path) -> Node:
        node = self.expr
        for step in path:
            node = node.inner if isinstance(node, Cone) else node.factors[step]
        return node

    # -- unfolding maps

    def tube_unfold(self, S: str, e, t: float):
        """L_{T_S}(e, t) = |t| * e for t != 0, tau_S(e) for t == 0; e must lie on radium^-1(1)."""
        if abs(self.radium(S, e) - 1.0) > CANONICAL_TOL:
            raise ModelError(f"point is not on the unit sub-bundle of {S} (radium {self.radium(S, e)})")
        if t == 0:
            return self.project(S, e)
        return self.radial(abs(t), e, S)

    def glue(self, S: str, x, t: float):
        """theta(x, t) = (|t| * x, sign t) for x on the unit sub-bundle."""
        if t == 0:
            raise ModelError("gluing map is only defined for t != 0")
        if abs(self.radium(S, x) - 1.0) > CANONICAL_TOL:
            raise ModelError(f"point is not on the unit sub-bundle of {S}")
        return self.radial(abs(t), x, S), (1 if t > 0 else -1)

    def tube_unfold_preimage(self, S: str, x) -> list[tuple[object, float]]:
        """The two points (e, +rho) and (e, -rho) over x, for x off the stratum."""
        rho = self.radium(S, x)
        if rho == 0:
            raise ModelError("over a stratum point the preimage is a whole link fiber")
        e = self.radial(1.0 / rho, x, S)
        return [(e, rho), (e, -rho)]

    # -- sampling

    def sample(self, n: int, seed: int = 0, cone_radius: float = 1.0) -> list:
        """n quasi-random points (scrambled Halton), deterministic for a given seed."""
        d = coordinate_count(self.expr)
        if d == 0:
            return [self.basepoint()] * n
        pts = qmc.Halton(d, scramble=True, seed=seed).random(n)
        out = []
        for row in pts:
            u = list(reversed(row.tolist()))
            out.append(canonical(self.expr, _from_unit(self.expr, u, cone_radius)))
        return out


def realize(expr: Node, epsilon: float = DEFAULT_EPSILON) -> RealizedSpace:
    check_term(expr)
    return RealizedSpace(expr, skeleton(expr), _tubes(expr, epsilon))


# ---------------------------------------------------------------- Thom-Mather


@dataclass
class ThomMatherReport:
    samples: int
    violations: dict = field(default_factory=dict)  # (S, R) incomparable -> hit count
    witnessed: dict = field(default_factory=dict)  # (S, R) comparable -> bool

    @property
    def passed(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.passed:
            seen = sum(self.witnessed.values())
            return f"thom-mather: pass ({self.samples} samples, {seen}/{len(self.witnessed)} comparable tube pairs seen meeting)"
        pairs = ", ".join(f"{a}~{b} ({n})" for (a, b), n in sorted(self.violations.items()))
        return f"thom-mather: FAIL ({self.samples} samples; incomparable tubes meet: {pairs})"


def thom_mather_check(space: RealizedSpace, samples: int, seed: int = 0) -> ThomMatherReport:
    """Sample points and flag any lying in the tubes of two incomparable strata."""
    X = space.skeleton
    singular = sorted(space.tubes)
    pairs = [(a, b) for i, a in enumerate(singular) for b in singular[i + 1:]]
    comparable = {p: X.less(*p) or X.less(p[1], p[0]) for p in pairs}
    report = ThomMatherReport(samples, {}, {p: False for p in pairs if comparable[p]})
    if not pairs:
        return report
    for x in space.sample(samples, seed=seed):
        inside = [s for s in singular if space.in_tube(s, x)]
        for i, a in enumerate(inside):
            for b in inside[i + 1:]:
                if comparable[(a, b)]:
                    report.witnessed[(a, b)] = True
                else:
                    report.violations[(a, b)] = report.violations.get((a, b), 0) + 1
    return report


def sample_in_tube(space: RealizedSpace, S: str, n: int, seed: int = 0) -> list:
    """n points inside T_S, built through the tube chart with radius in (0, epsilon)."""
    rng = np.random.default_rng(seed)
    link = realize(space.link_term(S))
    bases = [space.project(S, x) for x in _points_near(space, S, n, rng)]
    out = []
    for base, l in zip(bases, link.sample(n, seed=seed)):
        r = float(rng.uniform(0.0, space.tube(S).epsilon))
        r = max(r, 1e-6)
        out.append(space.chart(S, base, l, r))
    return out


def _points_near(space: RealizedSpace, S: str, n: int, rng) -> Iterable:
    found = []
    seed = int(rng.integers(1 << 30))
    while len(found) < n:
        for x in space.sample(4 * n, seed=seed):
            try:
                space.radium(S, x)
            except ModelError:
                continue
            found.append(x)
            if len(found) == n:
                break
        seed += 1
    return found
