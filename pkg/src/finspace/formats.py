"""Text and JSON formats for posets and maps.

Poset files::

    # comment
    element a
    element b
    rel b < a

Relations may be any pairs; the order is their reflexive-transitive
closure. Map files hold ``map NAME -> NAME`` lines, one per domain element.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import DuplicateLabel, FinSpaceError, ParseError
from .poset import FinitePoset, PointMap, build_poset


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_poset(text: str) -> FinitePoset:
    labels = []
    seen = set()
    relations = []
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] == "element" and len(parts) == 2:
            if parts[1] in seen:
                raise ParseError(f"duplicate element {parts[1]!r}", no)
            seen.add(parts[1])
            labels.append(parts[1])
        elif parts[0] == "rel" and len(parts) == 4 and parts[2] == "<":
            relations.append((no, parts[1], parts[3]))
        else:
            raise ParseError(f"cannot parse {line!r}", no)
    for no, lower, upper in relations:
        for lab in (lower, upper):
            if lab not in seen:
                raise ParseError(f"relation uses undeclared element {lab!r}", no)
    try:
        return build_poset(labels, [(lo, up) for _, lo, up in relations])
    except DuplicateLabel as exc:  # pragma: no cover - caught above
        raise ParseError(str(exc)) from exc
    except FinSpaceError as exc:
        raise ParseError(str(exc)) from exc


def parse_map(text: str, dom: FinitePoset, cod: FinitePoset) -> PointMap:
    mapping = {}
    for no, line in _lines(text):
        parts = line.split()
        if len(parts) != 4 or parts[0] != "map" or parts[2] != "->":
            raise ParseError(f"cannot parse {line!r}", no)
        src, dst = parts[1], parts[3]
        if src not in dom._index:
            raise ParseError(f"{src!r} is not a domain element", no)
        if dst not in cod._index:
            raise ParseError(f"{dst!r} is not a codomain element", no)
        if src in mapping:
            raise ParseError(f"{src!r} is mapped twice", no)
        mapping[src] = dst
    missing = [lab for lab in dom.labels if lab not in mapping]
    if missing:
        raise ParseError(f"map is not defined on {', '.join(missing)}")
    return PointMap.from_labels(dom, cod, mapping)


def format_poset(X: FinitePoset) -> str:
    out = [f"element {lab}" for lab in X.labels]
    out += [f"rel {X.labels[b]} < {X.labels[a]}" for a, b in sorted(X.covers)]
    return "\n".join(out) + "\n"


def format_map(f: PointMap) -> str:
    return "".join(f"map {a} -> {b}\n" for a, b in f.as_labels().items())


def poset_to_json(X: FinitePoset) -> dict:
    """``{"elements": [...], "covers": [[lower, upper], ...]}``."""
    return {
        "elements": list(X.labels),
        "covers": [[X.labels[b], X.labels[a]] for a, b in sorted(X.covers)],
    }


def poset_from_json(data) -> FinitePoset:
    if isinstance(data, str):
        data = json.loads(data)
    rels = data.get("covers", data.get("relations", []))
    return build_poset(data["elements"], [tuple(r) for r in rels])


def read_poset(path) -> FinitePoset:
    return parse_poset(Path(path).read_text())


def read_map(path, dom: FinitePoset, cod: FinitePoset) -> PointMap:
    return parse_map(Path(path).read_text(), dom, cod)
