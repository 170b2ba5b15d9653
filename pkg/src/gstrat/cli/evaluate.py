"""Evaluation of parsed DSL scripts."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import model
from ..abelian import subgroup_closure
from ..errors import GStratError
from ..iso import SpaceIso, is_isomorphic
from ..strat import StratSpace, ValidationReport, cone, depth, format_space, orbit_space, product, validate
from ..unfold import elementary_unfold, unfold_all
from .dsl import Call, Emit, Let, Ref, Script, Span, SubgroupLit
from .emit import emit_dot, emit_json


class EvalError(GStratError):
    def __init__(self, message: str, span: Span):
        self.span = span
        super().__init__(f"{span}: error: {message}")


@dataclass(frozen=True)
class SpaceValue:
    space: StratSpace
    term: object = None  # grammar term while the space is still realizable
    provenance: dict | None = field(default=None, hash=False, compare=False)

    def render(self) -> str:
        text = format_space(self.space)
        if self.provenance is not None:
            pairs = ", ".join(f"{new}<-{old}" for new, old in self.provenance.items())
            text += f"\nprovenance: {pairs}"
        return text


@dataclass(frozen=True)
class ValidateValue:
    report: ValidationReport
    thom_mather: model.ThomMatherReport | None = None

    def render(self) -> str:
        text = str(self.report)
        if self.thom_mather is not None:
            text += "\n" + str(self.thom_mather)
        return text


@dataclass(frozen=True)
class IsoValue:
    witness: SpaceIso | None

    def render(self) -> str:
        if self.witness is None:
            return "not isomorphic"
        return "isomorphic\nwitness: " + self.witness.summary()


def render(value) -> str:
    return str(value) if isinstance(value, int) else value.render()


@dataclass
class Evaluator:
    samples: int = 1000
    seed: int = 0
    emit: str | None = None  # render printed spaces as "dot"/"json" instead of text
    env: dict = field(default_factory=dict)

    def run(self, script: Script) -> list[str]:
        """Evaluate statements in order, returning the text each one outputs."""
        out = []
        for stmt in script.statements:
            text = self.statement(stmt)
            if text is not None:
                out.append(text)
        return out

    def statement(self, stmt) -> str | None:
        if isinstance(stmt, Let):
            self.env[stmt.name] = self.expr(stmt.expr)
            return None
        value = self.expr(stmt.expr)
        fmt = stmt.fmt if isinstance(stmt, Emit) else self.emit
        if fmt is not None and isinstance(value, SpaceValue):
            return self._emit(fmt, value, stmt.span).rstrip("\n")
        if isinstance(stmt, Emit):
            raise EvalError(f"emit {stmt.fmt} needs a space, got {type(value).__name__}", stmt.span)
        return render(value)

    def _emit(self, fmt: str, value: SpaceValue, span: Span) -> str:
        try:
            return emit_dot(value.space) if fmt == "dot" else emit_json(value.space)
        except GStratError as exc:
            raise EvalError(str(exc), span) from exc

    def expr(self, e):
        if isinstance(e, Ref):
            if e.name not in self.env:
                raise EvalError(f"unbound identifier {e.name!r}", e.span)
            return self.env[e.name]
        if isinstance(e, Call):
            try:
                return getattr(self, "_" + e.name)(e)
            except EvalError:
                raise
            except GStratError as exc:
                raise EvalError(str(exc), e.span) from exc
        raise EvalError(f"unexpected expression {e!r}", Span(0, 0))

    def _space(self, e) -> SpaceValue:
        v = self.expr(e)
        if not isinstance(v, SpaceValue):
            raise EvalError(f"expected a space, got {type(v).__name__}", e.span)
        return v

    # -- builders

    def _realized(self, term) -> SpaceValue:
        return SpaceValue(model.skeleton(term), term)

    def _euclidean(self, e: Call):
        return self._realized(model.Euclidean(e.args[0].value))

    def _circle(self, e: Call):
        return self._realized(model.Circle(e.args[0].value))

    def _rotsphere(self, e: Call):
        return self._realized(model.RotSphere(e.args[0].value))

    def _cone(self, e: Call):
        inner = self._space(e.args[0])
        X = cone(inner.space)
        return SpaceValue(X, None if inner.term is None else model.Cone(inner.term))

    def _product(self, e: Call):
        a, b = (self._space(x) for x in e.args)
        flat_a, flat_b = _flat_dim(a), _flat_dim(b)
        if flat_a is None and flat_b is None:
            raise EvalError("product needs one factor to be a manifold with trivial action", e.span)
        if flat_a is not None and flat_b is not None:
            X = model.skeleton(model.Euclidean(flat_a + flat_b)) if flat_a + flat_b else b.space
        elif flat_a is not None:
            X = product(flat_a, b.space)
        else:
            X = product(flat_b, a.space)
        term = None
        if a.term is not None and b.term is not None:
            term = model.Product(a.term, b.term)
            try:
                X = model.skeleton(term)
            except model.ModelError:
                term = None  # e.g. circle(1) used as a manifold factor: strat-only
        return SpaceValue(X, term)

    def _quotient(self, e: Call):
        v = self._space(e.args[0])
        lit: SubgroupLit = e.args[1]
        G = v.space.top
        gens = []
        for g in lit.generators:
            if len(g) != G.rank:
                raise EvalError(f"generator {g} does not match the rank of {G}", lit.span)
            gens.append(tuple(x % n for x, n in zip(g, G.moduli)))
        K = subgroup_closure(G, gens)
        Y, _ = orbit_space(v.space, K)
        term = None if v.term is None else model.quotient_term(v.term, K.order)
        return SpaceValue(Y, term)

    # -- queries

    def _unfold(self, e: Call):
        step = elementary_unfold(self._space(e.args[0]).space)
        return SpaceValue(step.result, None, dict(step.provenance))

    def _unfold_all(self, e: Call):
        chain = unfold_all(self._space(e.args[0]).space)
        return SpaceValue(chain.result, None, dict(chain.total_provenance))

    def _depth(self, e: Call):
        return depth(self._space(e.args[0]).space)

    def _validate(self, e: Call):
        v = self._space(e.args[0])
        tm = None
        if v.term is not None and self.samples > 0:
            tm = model.thom_mather_check(model.realize(v.term), self.samples, self.seed)
        return ValidateValue(validate(v.space), tm)

    def _iso(self, e: Call):
        a, b = (self._space(x) for x in e.args)
        return IsoValue(is_isomorphic(a.space, b.space))


def _flat_dim(v: SpaceValue) -> int | None:
    """Dimension if v is a single-stratum manifold with trivial top group."""
    X = v.space
    if X.top.order == 1 and len(X.strata) == 1 and not X.order:
        return X.strata[0].dim
    return None


def evaluate(script: Script, **options) -> list[str]:
    return Evaluator(**options).run(script)

