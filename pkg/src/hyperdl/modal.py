"""Positive modal algebras, modal spaces, and their dualities.

A modal space is a finite poset with a relation R; box/diamond act on
subsets as the usual preimage operators.  The full, box-only and diamond-only
flavors share one code path with clause masks.  The algebra<->space
translations realize the dualities as executable round trips.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .free_modal import ModalRealization, concrete_modal_lattice, _mask
from .hyperspaces import FAMILY_CONVEX, hyper_family
from .lattices import DistLattice, DualSpace, LatticeHom, priestley_dual, upset_lattice
from .posets import Poset, bit_indices
from .reports import Report

FULL = "full"
BOX_ONLY = "box-only"
DIAMOND_ONLY = "diamond-only"


@dataclass(frozen=True)
class ModalSpace:
    space: Poset
    rel: tuple[int, ...]          # rel[x] = successor mask
    kind: str = FULL

    def box_r(self, u: int) -> int:
        """{x : R[x] within u}."""
        self.space.check_subset(u)
        return _mask(x for x in range(self.space.n) if not (self.rel[x] & ~u))

    def diamond_r(self, u: int) -> int:
        """{x : R[x] meets u} (the relational preimage of u)."""
        self.space.check_subset(u)
        return _mask(x for x in range(self.space.n) if self.rel[x] & u)


@dataclass(frozen=True)
class ModalAlgebra:
    lattice: DistLattice
    box: tuple[int, ...] | None
    dia: tuple[int, ...] | None
    kind: str = FULL


def validate_modal_space(s: ModalSpace) -> Report:
    """Clause checks per kind: image shape (convex/upset/downset) and
    preservation of upsets by the active operators."""
    rep = Report(f"modal-space-valid-{s.kind}")
    x = s.space
    for p in range(x.n):
        img = s.rel[p]
        if s.kind == FULL:
            rep.check(x.is_convex(img), f"space(n={x.n})", "successor set is convex", f"x={p}")
        elif s.kind == BOX_ONLY:
            rep.check(x.is_upset(img), f"space(n={x.n})", "successor set is an upset", f"x={p}")
        else:
            rep.check(x.is_downset(img), f"space(n={x.n})", "successor set is a downset", f"x={p}")
    for u in x.upsets():
        if s.kind in (FULL, BOX_ONLY):
            rep.check(x.is_upset(s.box_r(u)), f"space(n={x.n})",
                      "box of an upset is an upset", bin(u))
        if s.kind in (FULL, DIAMOND_ONLY):
            rep.check(x.is_upset(s.diamond_r(u)), f"space(n={x.n})",
                      "diamond of an upset is an upset", bin(u))
    return rep


def validate_modal_algebra(a: ModalAlgebra) -> Report:
    rep = Report(f"modal-algebra-valid-{a.kind}")
    lat = a.lattice
    name = f"algebra(n={lat.n})"
    if a.kind in (FULL, BOX_ONLY):
        box = a.box
        rep.check(box is not None and box[lat.top] == lat.top, name, "box of top is top")
        for p in range(lat.n):
            for q in range(lat.n):
                rep.check(box[lat.meet[p][q]] == lat.meet[box[p]][box[q]], name,
                          "box preserves meets", f"({p}, {q})")
    if a.kind in (FULL, DIAMOND_ONLY):
        dia = a.dia
        rep.check(dia is not None and dia[lat.bot] == lat.bot, name, "diamond of bottom is bottom")
        for p in range(lat.n):
            for q in range(lat.n):
                rep.check(dia[lat.join[p][q]] == lat.join[dia[p]][dia[q]], name,
                          "diamond preserves joins", f"({p}, {q})")
    if a.kind == FULL:
        for p in range(lat.n):
            for q in range(lat.n):
                rep.check(lat.leq(a.box[lat.join[p][q]], lat.join[a.box[p]][a.dia[q]]), name,
                          "box of join below box-or-diamond", f"({p}, {q})")
                rep.check(lat.leq(lat.meet[a.box[p]][a.dia[q]], a.dia[lat.meet[p][q]]), name,
                          "box-and-diamond below diamond of meet", f"({p}, {q})")
    return rep


def space_to_algebra(s: ModalSpace, cu: DistLattice | None = None) -> ModalAlgebra:
    """Clopen-upset algebra with box/diamond restricted to upsets."""
    rep = validate_modal_space(s)
    if not rep.passed:
        raise ValidationError(rep.summary())
    cu = cu or upset_lattice(s.space)
    index = {u: i for i, u in enumerate(cu.sets)}
    box = dia = None
    if s.kind in (FULL, BOX_ONLY):
        box = tuple(index[s.box_r(u)] for u in cu.sets)
    if s.kind in (FULL, DIAMOND_ONLY):
        dia = tuple(index[s.diamond_r(u)] for u in cu.sets)
    alg = ModalAlgebra(cu, box, dia, s.kind)
    arep = validate_modal_algebra(alg)
    if not arep.passed:
        raise ValidationError(arep.summary())
    return alg


def algebra_to_space(a: ModalAlgebra, dual: DualSpace | None = None) -> ModalSpace:
    """Dual space with the canonical relation: x R y iff every box-member of x
    is in y (box clause) and every member of y has its diamond in x (diamond
    clause); kinds keep only their own clause."""
    rep = validate_modal_algebra(a)
    if not rep.passed:
        raise ValidationError(rep.summary())
    dual = dual or priestley_dual(a.lattice)
    n = dual.space.n
    lat = a.lattice
    rel = []
    for x in range(n):
        row = 0
        px = dual.points[x]
        for y in range(n):
            py = dual.points[y]
            ok = True
            if a.kind in (FULL, BOX_ONLY):
                ok = all(py >> e & 1 for e in range(lat.n) if px >> a.box[e] & 1)
            if ok and a.kind in (FULL, DIAMOND_ONLY):
                ok = all(px >> a.dia[e] & 1 for e in bit_indices(py))
            if ok:
                row |= 1 << y
        rel.append(row)
    space = ModalSpace(dual.space, tuple(rel), a.kind)
    srep = validate_modal_space(space)
    if not srep.passed:
        raise ValidationError(srep.summary())
    return space


def round_trip_space(s: ModalSpace) -> Report:
    """space -> clopen-upset algebra -> dual space equals the original, along
    the canonical counit bijection."""
    from .lattices import counit_iso
    rep = Report(f"round-trip-space-{s.kind}")
    cu = upset_lattice(s.space)
    alg = space_to_algebra(s, cu)
    dual = priestley_dual(cu)
    back = algebra_to_space(alg, dual)
    canon = counit_iso(s.space, cu, dual)
    n = s.space.n
    for x in range(n):
        for y in range(n):
            rep.check(bool(s.rel[x] >> y & 1) == bool(back.rel[canon[x]] >> canon[y] & 1),
                      f"space(n={n})", "relation transported exactly", f"({x}, {y})")
    return rep


def round_trip_algebra(a: ModalAlgebra) -> Report:
    """algebra -> dual modal space -> clopen-upset algebra equals the
    original, along the unit isomorphism."""
    from .lattices import unit_iso
    rep = Report(f"round-trip-algebra-{a.kind}")
    dual = priestley_dual(a.lattice)
    space = algebra_to_space(a, dual)
    cu = upset_lattice(dual.space)
    back = space_to_algebra(space, cu)
    unit = unit_iso(a.lattice, dual, cu)
    name = f"algebra(n={a.lattice.n})"
    for e in range(a.lattice.n):
        if a.kind in (FULL, BOX_ONLY):
            rep.check(unit(a.box[e]) == back.box[unit(e)], name,
                      "box transported exactly", a.lattice.name_of(e))
        if a.kind in (FULL, DIAMOND_ONLY):
            rep.check(unit(a.dia[e]) == back.dia[unit(e)], name,
                      "diamond transported exactly", a.lattice.name_of(e))
    return rep


def p_morphism_report(f, s1: ModalSpace, s2: ModalSpace) -> Report:
    """Monotonicity, forth, back (two-witness clause for the full kind), and
    for the full kind the hull condition with its equivalence to forth+back."""
    f = tuple(f)
    rep = Report(f"p-morphism-{s1.kind}")
    x1, x2 = s1.space, s2.space
    name = f"map {x1.n}->{x2.n}"
    monotone = all(x2.leq(f[i], f[j]) for i in range(x1.n) for j in range(x1.n) if x1.leq(i, j))
    rep.check(monotone, name, "order-preserving")
    forth = all(s2.rel[f[x]] >> f[z] & 1
                for x in range(x1.n) for z in bit_indices(s1.rel[x]))
    rep.check(forth, name, "forth condition")
    back = True
    for x in range(x1.n):
        for y in bit_indices(s2.rel[f[x]]):
            if s1.kind == FULL:
                ok = (any(x2.leq(f[z], y) for z in bit_indices(s1.rel[x]))
                      and any(x2.leq(y, f[z]) for z in bit_indices(s1.rel[x])))
            elif s1.kind == BOX_ONLY:
                ok = any(x2.leq(f[z], y) for z in bit_indices(s1.rel[x]))
            else:
                ok = any(x2.leq(y, f[z]) for z in bit_indices(s1.rel[x]))
            if not ok:
                back = False
                rep.fail(name, "back condition", f"(x={x}, y={y})")
    rep.tick()
    if s1.kind == FULL:
        hull_ok = True
        for x in range(x1.n):
            image = _mask(f[z] for z in bit_indices(s1.rel[x]))
            if x2.convex_hull(image) != s2.rel[f[x]]:
                hull_ok = False
        rep.check(hull_ok == (forth and back), name,
                  "hull condition equivalent to forth+back",
                  f"hull={hull_ok}, clauses={forth and back}")
        rep.check(not (forth and back) or hull_ok, name, "hull condition holds")
    return rep


def coalg_translation(s: ModalSpace) -> tuple[tuple[int, ...], Report]:
    """The structure map x -> R[x] into the convex family; verified to land in
    convex members, to be monotone, and to recover R exactly."""
    rep = Report("space-to-coalgebra")
    conv = hyper_family(s.space, FAMILY_CONVEX)
    cindex = conv.family.member_index()
    name = f"space(n={s.space.n})"
    rho = []
    for x in range(s.space.n):
        img = s.rel[x]
        if img not in cindex:
            rep.fail(name, "successor set is a convex member", f"x={x}")
            rho.append(-1)
            continue
        rho.append(cindex[img])
    if rep.passed:
        for x in range(s.space.n):
            for y in range(s.space.n):
                if s.space.leq(x, y):
                    rep.check(bool(conv.family.leq[rho[x]] >> rho[y] & 1), name,
                              "structure map is monotone", f"({x}, {y})")
        for x in range(s.space.n):
            rep.check(conv.family.members[rho[x]] == s.rel[x], name,
                      "relation recovered from the structure map", f"x={x}")
    return tuple(rho), rep


def alg_translation(a: ModalAlgebra, route: ModalRealization | None = None) -> tuple[tuple[int, ...], Report]:
    """The structure hom from the free modal lattice into the algebra,
    determined by sending generators to the algebra operators; verified a
    bounded hom with exact operator recovery."""
    vrep = validate_modal_algebra(a)
    if not vrep.passed:
        raise ValidationError(vrep.summary())
    lat = a.lattice
    route = route or concrete_modal_lattice(lat)
    rep = Report(f"algebra-to-structure-hom-{a.kind}")
    name = f"algebra(n={lat.n})"
    box = a.box if a.box is not None else tuple(range(lat.n))
    dia = a.dia if a.dia is not None else tuple(range(lat.n))

    def tau(w: int) -> int:
        out = lat.bot
        for j in route.ji:
            if j & ~w:
                continue
            box_over = [e for e in range(lat.n) if not (j & ~route.gen_box[e])]
            val = box[lat.meet_all(box_over)]
            for b in range(lat.n):
                if not (j & ~route.gen_dia[b]):
                    val = lat.meet[val][dia[b]]
            out = lat.join[out][val]
        return out

    mapping = tuple(tau(w) for w in route.elements)
    idx = route.index()
    for e in range(lat.n):
        if a.kind in (FULL, BOX_ONLY):
            rep.check(mapping[idx[route.gen_box[e]]] == a.box[e], name,
                      "box operator recovered", lat.name_of(e))
        if a.kind in (FULL, DIAMOND_ONLY):
            rep.check(mapping[idx[route.gen_dia[e]]] == a.dia[e], name,
                      "diamond operator recovered", lat.name_of(e))
    rep.check(mapping[idx[route.bot]] == lat.bot, name, "bottom preserved")
    rep.check(mapping[idx[route.top]] == lat.top, name, "top preserved")
    if len(route) <= 512:
        for i, v in enumerate(route.elements):
            for k, w in enumerate(route.elements):
                if not rep.check(mapping[idx[v & w]] == lat.meet[mapping[i]][mapping[k]],
                                 name, "structure map preserves meets"):
                    break
                if not rep.check(mapping[idx[v | w]] == lat.join[mapping[i]][mapping[k]],
                                 name, "structure map preserves joins"):
                    break
    return mapping, rep


def enumerate_modal_spaces(x: Poset, kind: str = FULL):
    """All valid modal spaces on x (relations filtered by validity)."""
    n = x.n
    for code in range(1 << (n * n)):
        rel = tuple((code >> (i * n)) & ((1 << n) - 1) for i in range(n))
        s = ModalSpace(x, rel, kind)
        if validate_modal_space(s).passed:
            yield s


def enumerate_modal_algebras(lat: DistLattice, kind: str = FULL):
    """All valid operator (pairs) on the lattice, box and diamond filtered
    separately before crossing them for the full kind."""
    import itertools
    n = lat.n
    boxes = []
    dias = []
    if kind in (FULL, BOX_ONLY):
        for cand in itertools.product(range(n), repeat=n):
            if cand[lat.top] != lat.top:
                continue
            if all(cand[lat.meet[p][q]] == lat.meet[cand[p]][cand[q]]
                   for p in range(n) for q in range(n)):
                boxes.append(tuple(cand))
    if kind in (FULL, DIAMOND_ONLY):
        for cand in itertools.product(range(n), repeat=n):
            if cand[lat.bot] != lat.bot:
                continue
            if all(cand[lat.join[p][q]] == lat.join[cand[p]][cand[q]]
                   for p in range(n) for q in range(n)):
                dias.append(tuple(cand))
    if kind == BOX_ONLY:
        for box in boxes:
            yield ModalAlgebra(lat, box, None, kind)
    elif kind == DIAMOND_ONLY:
        for dia in dias:
            yield ModalAlgebra(lat, None, dia, kind)
    else:
        for box in boxes:
            for dia in dias:
                if all(lat.leq(box[lat.join[p][q]], lat.join[box[p]][dia[q]])
                       and lat.leq(lat.meet[box[p]][dia[q]], dia[lat.meet[p][q]])
                       for p in range(n) for q in range(n)):
                    yield ModalAlgebra(lat, box, dia, kind)
