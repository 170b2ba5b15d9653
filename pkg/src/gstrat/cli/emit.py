"""DOT and JSON renderings of stratified spaces, plus the JSON reader."""

from __future__ import annotations

import json

from ..abelian import FiniteAbelianGroup, Subgroup
from ..errors import GStratError
from ..strat import StratSpace, Stratum, hasse_edges, require_valid


def _node_label(s: Stratum) -> str:
    inv = ",".join(str(d) for d in s.isotropy.invariant_factors)
    return f"{s.id}|{s.dim}|{inv}"


def _dot_body(X: StratSpace, prefix: str, indent: str, links: bool, out: list[str]):
    for s in X.strata:
        out.append(f'{indent}"{prefix}{s.id}" [label="{_node_label(s)}"];')
    for a, b in hasse_edges(X):
        out.append(f'{indent}"{prefix}{a}" -> "{prefix}{b}";')
    if not links:
        return
    for s in X.strata:
        if s.link is None:
            continue
        sub = f"{prefix}{s.id}/"
        out.append(f'{indent}subgraph "cluster_{sub}" {{')
        out.append(f'{indent}  label="link of {prefix}{s.id}";')
        _dot_body(s.link, sub, indent + "  ", links, out)
        out.append(f"{indent}}}")


def emit_dot(X: StratSpace, links: bool = True) -> str:
    """Hasse diagram as a DOT digraph; links become nested clusters."""
    require_valid(X, "space for DOT output")
    out = ["digraph strat {", "  rankdir=BT;", "  node [shape=record];"]
    _dot_body(X, "", "  ", links, out)
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- JSON


def _subgroup_obj(H: Subgroup) -> dict:
    return {"generators": [list(g) for g in H.generators], "elements": [list(g) for g in H.elements]}


def space_to_obj(X: StratSpace) -> dict:
    strata = []
    for s in X.strata:
        strata.append({
            "id": s.id,
            "dim": s.dim,
            "isotropy": _subgroup_obj(s.isotropy),
            "link": None if s.link is None else space_to_obj(s.link),
            "attach": None if s.attach is None else dict(s.attach),
        })
    return {
        "top": list(X.top.moduli),
        "acting": _subgroup_obj(X.acting),
        "compact": X.compact,
        "strata": strata,
        "order": sorted([a, b] for a, b in X.order),
    }


def emit_json(X: StratSpace) -> str:
    """Lossless, deterministic serialization (sorted keys, sorted order pairs)."""
    require_valid(X, "space for JSON output")
    return json.dumps(space_to_obj(X), sort_keys=True, indent=2) + "\n"


def _subgroup_from(G: FiniteAbelianGroup, obj) -> Subgroup:
    return Subgroup(G, tuple(tuple(g) for g in obj["generators"]), tuple(tuple(g) for g in obj["elements"]))


def space_from_obj(obj: dict) -> StratSpace:
    try:
        G = FiniteAbelianGroup(tuple(obj["top"]))
        strata = []
        for s in obj["strata"]:
            link = None if s["link"] is None else space_from_obj(s["link"])
            strata.append(Stratum(s["id"], s["dim"], _subgroup_from(G, s["isotropy"]), link, s["attach"]))
        order = frozenset((a, b) for a, b in obj["order"])
        return StratSpace(G, _subgroup_from(G, obj["acting"]), tuple(strata), order, obj["compact"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GStratError):
            raise
        raise GStratError(f"malformed space serialization: {exc!r}") from exc


def read_json(text: str) -> StratSpace:
    X = space_from_obj(json.loads(text))
    require_valid(X, "deserialized space")
    return X
