"""JSON input documents and DOT output.

One JSON format per document kind: poset, lattice (directly or as the
downset lattice of a poset), modal-space (poset plus an R edge list), and
modal-algebra (lattice plus box/dia arrays).  Printing is canonical (full
non-reflexive order pairs, sorted), so parse after print is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import LatticeError, ParseError, ValidationError
from .lattices import DistLattice, downset_lattice
from .modal import BOX_ONLY, DIAMOND_ONLY, FULL, ModalAlgebra, ModalSpace, validate_modal_algebra, validate_modal_space
from .posets import Poset, bit_indices

KINDS = ("poset", "lattice", "modal-space", "modal-algebra")


@dataclass(frozen=True)
class InputDocument:
    kind: str
    names: tuple[str, ...]
    poset: Poset | None = None
    lattice: DistLattice | None = None
    modal_space: ModalSpace | None = None
    modal_algebra: ModalAlgebra | None = None

    def name_index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}


def _parse_poset_payload(data: dict, where: str) -> tuple[Poset, tuple[str, ...]]:
    try:
        elements = list(data["elements"])
    except KeyError:
        raise ParseError(f"{where}: missing field 'elements'")
    if len(set(elements)) != len(elements):
        raise ParseError(f"{where}: duplicate element names")
    index = {e: i for i, e in enumerate(elements)}
    pairs = []
    for entry in data.get("leq", []):
        if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
            raise ParseError(f"{where}: leq entries must be [a, b] pairs, got {entry!r}")
        a, b = entry
        for e in (a, b):
            if e not in index:
                raise ParseError(f"{where}: leq mentions unknown element {e!r}")
        pairs.append((index[a], index[b]))
    try:
        poset = Poset.from_pairs(len(elements), pairs, close=True)
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}")
    return poset, tuple(str(e) for e in elements)


def _set_name(mask: int, names) -> str:
    return "{" + ",".join(names[i] for i in bit_indices(mask)) + "}"


def _parse_lattice_payload(data: dict, where: str) -> tuple[DistLattice, tuple[str, ...]]:
    if "downsets_of" in data:
        poset, pnames = _parse_poset_payload(data["downsets_of"], where + ".downsets_of")
        lat = downset_lattice(poset)
        names = tuple(_set_name(s, pnames) for s in lat.sets)
        return DistLattice(lat.order, lat.meet, lat.join, lat.bot, lat.top,
                           names=names, sets=lat.sets), names
    poset, names = _parse_poset_payload(data, where)
    try:
        lat = DistLattice.from_order(poset, names=names)
    except LatticeError as exc:
        raise ValidationError(f"{where}: {exc}")
    return lat, names


def _parse_unary(data: dict, field: str, names, where: str) -> tuple[int, ...]:
    raw = data[field]
    index = {e: i for i, e in enumerate(names)}
    if isinstance(raw, list):
        if len(raw) != len(names):
            raise ParseError(f"{where}: {field} must list one image per element")
        entries = list(zip(names, raw))
    elif isinstance(raw, dict):
        missing = [e for e in names if e not in raw]
        if missing:
            raise ParseError(f"{where}: {field} missing image for {missing[0]!r}")
        entries = [(e, raw[e]) for e in names]
    else:
        raise ParseError(f"{where}: {field} must be a list or object")
    out = []
    for src, img in entries:
        if img not in index:
            raise ParseError(f"{where}: {field} sends {src!r} to unknown element {img!r}")
        out.append(index[img])
    return tuple(out)


_FLAVORS = (FULL, BOX_ONLY, DIAMOND_ONLY)


def parse_input(text: str) -> InputDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown document kind {kind!r}; expected one of {KINDS}")
    if kind == "poset":
        poset, names = _parse_poset_payload(data, "poset")
        return InputDocument(kind, names, poset=poset)
    if kind == "lattice":
        lat, names = _parse_lattice_payload(data, "lattice")
        return InputDocument(kind, names, lattice=lat)
    if kind == "modal-space":
        poset, names = _parse_poset_payload(data, "modal-space")
        index = {e: i for i, e in enumerate(names)}
        rel = [0] * poset.n
        for entry in data.get("R", []):
            if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
                raise ParseError(f"modal-space: R entries must be [a, b] pairs, got {entry!r}")
            a, b = entry
            for e in (a, b):
                if e not in index:
                    raise ParseError(f"modal-space: R mentions unknown element {e!r}")
            rel[index[a]] |= 1 << index[b]
        flavor = data.get("flavor", FULL)
        if flavor not in _FLAVORS:
            raise ParseError(f"modal-space: unknown flavor {flavor!r}")
        space = ModalSpace(poset, tuple(rel), flavor)
        rep = validate_modal_space(space)
        if not rep.passed:
            first = rep.failures[0]
            raise ValidationError(f"modal-space: {first.law} ({first.witness})")
        return InputDocument(kind, names, modal_space=space)
    lat, names = _parse_lattice_payload(data, "modal-algebra")
    flavor = data.get("flavor")
    has_box = "box" in data
    has_dia = "dia" in data
    if flavor is None:
        flavor = FULL if has_box and has_dia else BOX_ONLY if has_box else DIAMOND_ONLY
    if flavor not in _FLAVORS:
        raise ParseError(f"modal-algebra: unknown flavor {flavor!r}")
    box = _parse_unary(data, "box", names, "modal-algebra") if has_box else None
    dia = _parse_unary(data, "dia", names, "modal-algebra") if has_dia else None
    if flavor in (FULL, BOX_ONLY) and box is None:
        raise ParseError("modal-algebra: missing 'box' array")
    if flavor in (FULL, DIAMOND_ONLY) and dia is None:
        raise ParseError("modal-algebra: missing 'dia' array")
    alg = ModalAlgebra(lat, box, dia, flavor)
    rep = validate_modal_algebra(alg)
    if not rep.passed:
        first = rep.failures[0]
        raise ValidationError(f"modal-algebra: {first.law} ({first.witness})")
    return InputDocument(kind, names, modal_algebra=alg)


def _leq_pairs(poset: Poset, names) -> list[list[str]]:
    out = []
    for i in range(poset.n):
        for j in bit_indices(poset.up[i]):
            if j != i:
                out.append([names[i], names[j]])
    return sorted(out)


def to_canonical_json(doc: InputDocument) -> str:
    names = list(doc.names)
    if doc.kind == "poset":
        payload = {"kind": "poset", "elements": names, "leq": _leq_pairs(doc.poset, names)}
    elif doc.kind == "lattice":
        payload = {"kind": "lattice", "elements": names,
                   "leq": _leq_pairs(doc.lattice.order, names)}
    elif doc.kind == "modal-space":
        s = doc.modal_space
        redges = sorted([names[x], names[y]] for x in range(s.space.n)
                        for y in bit_indices(s.rel[x]))
        payload = {"kind": "modal-space", "elements": names,
                   "leq": _leq_pairs(s.space, names), "R": redges, "flavor": s.kind}
    else:
        a = doc.modal_algebra
        payload = {"kind": "modal-algebra", "elements": names,
                   "leq": _leq_pairs(a.lattice.order, names), "flavor": a.kind}
        if a.box is not None:
            payload["box"] = [names[a.box[i]] for i in range(len(names))]
        if a.dia is not None:
            payload["dia"] = [names[a.dia[i]] for i in range(len(names))]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit_dot(poset: Poset, names=None, graph_name: str = "poset") -> str:
    """DOT digraph of the covering relation, bottom-up, stable ordering."""
    names = names or tuple(str(i) for i in range(poset.n))
    lines = [f"digraph {graph_name} {{", "  rankdir=BT;"]
    for i in range(poset.n):
        label = names[i].replace('"', r'\"')
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in poset.covers():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def family_dot(members, leq_rows, base_names) -> str:
    """DOT for an ordered family; members labelled as subsets of the base.

    Quasi-ordered families are drawn through their partial-order quotient,
    joining mutually comparable members into one node."""
    m = len(members)
    proj = [-1] * m
    classes: list[list[int]] = []
    for i in range(m):
        if proj[i] >= 0:
            continue
        cls = [j for j in bit_indices(leq_rows[i]) if leq_rows[j] >> i & 1]
        for j in cls:
            proj[j] = len(classes)
        classes.append(cls)
    rows = []
    for cls in classes:
        row = 0
        for cj, other in enumerate(classes):
            if leq_rows[cls[0]] >> other[0] & 1:
                row |= 1 << cj
        rows.append(row)
    labels = tuple("~".join(_set_name(members[i], base_names) for i in cls)
                   for cls in classes)
    return emit_dot(Poset(rows), labels, graph_name="family")
