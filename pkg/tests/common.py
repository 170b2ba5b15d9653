from __future__ import annotations

from functools import cache

from hypothesis import strategies as st

from gstrat.cli.dsl import SIGNATURES, Call, Emit, IntLit, Let, Print, Ref, Script, SubgroupLit
from gstrat.corpus import build_corpus, realizable


@cache
def corpus():
    return tuple(build_corpus())


@cache
def realized_corpus():
    return tuple(realizable(list(corpus())))


@st.composite
def scripts(draw):
    names: list[str] = []
    stmts = []

    def expr(depth):
        choices = ["leaf"] + (["ref"] if names else []) + (["call"] if depth < 3 else [])
        kind = draw(st.sampled_from(choices))
        if kind == "ref":
            return Ref(draw(st.sampled_from(names)))
        if kind == "leaf":
            fn = draw(st.sampled_from(["euclidean", "circle", "rotsphere"]))
            return Call(fn, (IntLit(draw(st.integers(1, 9))),))
        fn = draw(st.sampled_from(sorted(k for k, v in SIGNATURES.items() if "expr" in v)))
        args = []
        for kind in SIGNATURES[fn]:
            if kind == "subgroup":
                width = draw(st.integers(1, 3))
                gens = draw(st.lists(st.tuples(*[st.integers(0, 20)] * width), min_size=1, max_size=3))
                args.append(SubgroupLit(tuple(gens)))
            else:
                args.append(expr(depth + 1))
        return Call(fn, tuple(args))

    for i in range(draw(st.integers(0, 6))):
        kind = draw(st.sampled_from(["let", "print", "emit"]))
        if kind == "let":
            stmts.append(Let(f"x{i}", expr(0)))
            names.append(f"x{i}")
        elif kind == "print":
            stmts.append(Print(expr(0)))
        else:
            stmts.append(Emit(draw(st.sampled_from(["dot", "json"])), expr(0)))
    return Script(tuple(stmts))
