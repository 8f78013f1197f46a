"""JSON documents for sites and frames.

Site documents::

    {"format": "sheafcalc/site@1",
     "objects": ["a", "b"],
     "arrows": [["u", "a", "b"]],            # or {"id": .., "dom": .., "cod": ..}
     "identities": {"a": "id_a", "b": "id_b"},  # optional, defaults to id_<obj>
     "composition": [["g", "f", "gf"], ...],    # identity composites may be omitted
     "coverage": {"kind": "trivial"}}

Coverage kinds are ``trivial``, ``explicit`` (``"sieves": {obj: [[arrow, ..], ..]}``,
each list generating a sieve; the family is saturated to the least topology)
and ``canonical-frame`` (the category must be a poset with finite joins).

Frame documents: ``{"format": "sheafcalc/frame@1", "elements": [..], "order": [[x, y], ..]}``
with ``x <= y`` pairs (reflexive and transitive closure is taken).
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path

from .coverage import GrothendieckTopology, _all_masks, generate_topology, trivial_topology
from .errors import CapExceeded, CategoryError, DocumentError, FrameError, SheafcalcError
from .fincat import DEFAULT_MAX_FANIN, FinCategory, generate_sieve
from .frames import DEFAULT_MAX_FRAME, FiniteFrame
from .omega import Site

SITE_FORMAT = "sheafcalc/site@1"
FRAME_FORMAT = "sheafcalc/frame@1"


def _field(doc: Mapping, key: str, kind, where: str = ""):
    if key not in doc:
        raise DocumentError(f"{where}{key}: missing field")
    val = doc[key]
    if not isinstance(val, kind):
        raise DocumentError(f"{where}{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def _arrow_triples(raw: list) -> list[tuple[str, str, str]]:
    out = []
    for i, a in enumerate(raw):
        if isinstance(a, Mapping):
            missing = [k for k in ("id", "dom", "cod") if k not in a]
            if missing:
                raise DocumentError(f"arrows[{i}]: missing {', '.join(missing)}")
            out.append((str(a["id"]), str(a["dom"]), str(a["cod"])))
        elif isinstance(a, list) and len(a) == 3:
            out.append(tuple(str(x) for x in a))
        else:
            raise DocumentError(f"arrows[{i}]: expected [id, dom, cod] or an object")
    return out


def _category(doc: Mapping, max_fanin: int) -> FinCategory:
    objects = [str(o) for o in _field(doc, "objects", list)]
    arrows = _arrow_triples(_field(doc, "arrows", list))
    ids = doc.get("identities")
    if ids is None:
        ids = {o: f"id_{o}" for o in objects}
    elif not isinstance(ids, Mapping):
        raise DocumentError("identities: expected object")
    ids = {str(k): str(v) for k, v in ids.items()}
    known = {a for a, _, _ in arrows}
    for o in objects:
        if o in ids and ids[o] not in known:
            arrows.insert(0, (ids[o], o, o))
            known.add(ids[o])
    comp = []
    for i, t in enumerate(doc.get("composition", [])):
        if not (isinstance(t, list) and len(t) == 3):
            raise DocumentError(f"composition[{i}]: expected [g, f, gf]")
        comp.append(tuple(str(x) for x in t))
    have = {(g, f) for g, f, _ in comp}
    for a, d, c in arrows:
        for g, f in ((ids.get(c), a), (a, ids.get(d))):
            if g is not None and f is not None and (g, f) not in have:
                comp.append((g, f, a))
                have.add((g, f))
    try:
        return FinCategory(objects, arrows, ids, comp, max_fanin=max_fanin, name=doc.get("name"))
    except CategoryError as e:
        raise DocumentError("category: " + "; ".join(e.violations)) from e


def canonical_coverage(C: FinCategory) -> GrothendieckTopology:
    """Canonical coverage of a poset category with joins."""
    pairs = []
    for i in range(len(C.arrows)):
        d, c = C._dom[i], C._cod[i]
        if d != c:
            if any(C._dom[j] == c and C._cod[j] == d for j in range(len(C.arrows))):
                raise DocumentError("canonical-frame coverage needs an antisymmetric order")
            pairs.append((C.objects[d], C.objects[c]))
    if any(len(C.hom(x, y)) > 1 for x in C.objects for y in C.objects):
        raise DocumentError("canonical-frame coverage needs a thin category")
    try:
        A = FiniteFrame(list(C.objects), pairs, max_size=max(len(C.objects), DEFAULT_MAX_FRAME))
    except FrameError as e:
        raise DocumentError(f"canonical-frame coverage: {e}") from e
    covers = []
    for c, o in enumerate(C.objects):
        covers.append({m for m in _all_masks(C, c)
                       if A.join_all(C.objects[C._dom[a]] for a in C._members(c, m)) == o})
    return GrothendieckTopology(C, covers)


def site_from_document(doc: Mapping, *, max_fanin: int = DEFAULT_MAX_FANIN) -> Site:
    if doc.get("format") != SITE_FORMAT:
        raise DocumentError(f"format: expected {SITE_FORMAT!r}, got {doc.get('format')!r}")
    C = _category(doc, max_fanin)
    cov = doc.get("coverage", {"kind": "trivial"})
    if not isinstance(cov, Mapping):
        raise DocumentError("coverage: expected object")
    kind = cov.get("kind", "trivial")
    if kind == "trivial":
        J = trivial_topology(C)
    elif kind == "explicit":
        gens = []
        sieves = cov.get("sieves", {})
        if not isinstance(sieves, Mapping):
            raise DocumentError("coverage.sieves: expected object")
        for o, fams in sieves.items():
            if o not in C.objects:
                raise DocumentError(f"coverage.sieves.{o}: unknown object")
            for k, members in enumerate(fams):
                try:
                    gens.append(generate_sieve(C, o, [str(a) for a in members]))
                except (SheafcalcError, KeyError) as e:
                    raise DocumentError(f"coverage.sieves.{o}[{k}]: {e}") from e
        J = generate_topology(C, None, gens)
    elif kind == "canonical-frame":
        J = canonical_coverage(C)
    else:
        raise DocumentError(f"coverage.kind: unknown kind {kind!r}")
    return Site(C, J)


def frame_from_document(doc: Mapping, *, max_frame: int = DEFAULT_MAX_FRAME) -> FiniteFrame:
    if doc.get("format") != FRAME_FORMAT:
        raise DocumentError(f"format: expected {FRAME_FORMAT!r}, got {doc.get('format')!r}")
    elements = [str(x) for x in _field(doc, "elements", list)]
    pairs = []
    for i, p in enumerate(doc.get("order", [])):
        if not (isinstance(p, list) and len(p) == 2):
            raise DocumentError(f"order[{i}]: expected [x, y]")
        x, y = str(p[0]), str(p[1])
        for v in (x, y):
            if v not in elements:
                raise DocumentError(f"order[{i}]: unknown element {v!r}")
        pairs.append((x, y))
    try:
        return FiniteFrame(elements, pairs, max_size=max_frame)
    except CapExceeded:
        raise
    except FrameError as e:
        raise DocumentError(f"frame: {e}") from e


def site_document(site: Site, topology: GrothendieckTopology | None = None, name: str | None = None) -> dict:
    """Serialise a site, listing every covering sieve explicitly unless trivial."""
    C = site.category
    K = site.topology if topology is None else topology
    t = C.tables()
    doc = {"format": SITE_FORMAT}
    if name or C.name:
        doc["name"] = name or C.name
    doc.update({
        "objects": t["objects"],
        "arrows": [list(a) for a in t["arrows"]],
        "identities": t["identities"],
        "composition": [list(x) for x in t["composition"]],
    })
    if K == trivial_topology(C):
        doc["coverage"] = {"kind": "trivial"}
    else:
        doc["coverage"] = {"kind": "explicit", "sieves": K.as_dict()}
    return doc


def frame_document(A: FiniteFrame, name: str | None = None) -> dict:
    doc = {"format": FRAME_FORMAT}
    if name:
        doc["name"] = name
    doc["elements"] = [str(x) for x in A.elements()]
    doc["order"] = [[str(x), str(y)] for x, y in A.order_pairs() if x != y]
    return doc


def read_json(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise DocumentError(f"{path}: top level must be an object")
    return doc


def load(path: str | Path, *, max_fanin: int = DEFAULT_MAX_FANIN, max_frame: int = DEFAULT_MAX_FRAME):
    """Load a site or a frame, dispatching on the ``format`` tag."""
    doc = read_json(path)
    fmt = doc.get("format")
    try:
        if fmt == SITE_FORMAT:
            return site_from_document(doc, max_fanin=max_fanin)
        if fmt == FRAME_FORMAT:
            return frame_from_document(doc, max_frame=max_frame)
    except DocumentError as e:
        raise DocumentError(f"{path}: {e}") from e
    raise DocumentError(f"{path}: format: unknown tag {fmt!r}")


def dump(doc: Mapping, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
