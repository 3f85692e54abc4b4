"""Hyperspace families over a finite space and their subbasis elements.

For a finite space X the closed-set families are concrete: F is all subsets,
F+ all downsets, F- all upsets, C all convex subsets.  F and C carry the
Egli-Milner order, F+ and F- inclusion.  Hit sets (diamond) and miss sets
(box) are extents inside a family; the correspondence between filters of the
dual lattice and closed upsets transports them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CarrierMismatchError, HyperdlError, ResourceGuardError
from .lattices import (DistLattice, DualSpace, filters, is_filter,
                       principal_filter_generator, upset_lattice)
from .posets import EGLI_MILNER, OrderedFamily, Poset, bit_indices, em_quotient, order_iso_find
from .reports import Report

FAMILY_ALL = "F"
FAMILY_DOWNSETS = "F+"
FAMILY_UPSETS = "F-"
FAMILY_CONVEX = "C"


@dataclass(frozen=True)
class HyperFamily:
    base: Poset
    which: str
    family: OrderedFamily

    def __len__(self):
        return len(self.family)


def hyper_family(x: Poset, which: str, max_n: int = 14) -> HyperFamily:
    if which == FAMILY_ALL:
        if x.n > max_n:
            raise ResourceGuardError(f"full powerset family over 2^{x.n} members")
        members = sorted(range(1 << x.n), key=lambda m: (m.bit_count(), m))
        fam = OrderedFamily.egli_milner(x, members)
    elif which == FAMILY_DOWNSETS:
        fam = OrderedFamily.by_inclusion(x.downsets())
    elif which == FAMILY_UPSETS:
        fam = OrderedFamily.by_inclusion(x.upsets())
    elif which == FAMILY_CONVEX:
        fam = OrderedFamily.egli_milner(x, x.convex_sets(max_n))
    else:
        raise HyperdlError(f"unknown hyperspace family {which!r}")
    return HyperFamily(x, which, fam)


@dataclass(frozen=True)
class SubbasisElement:
    tag: str            # "box" (miss) or "diamond" (hit)
    window: int         # the K or U the extent is taken against
    extent: int         # mask over the family's member indices


def box_of(fam: HyperFamily, window: int) -> SubbasisElement:
    """Members missing the window: {C : C and window disjoint}."""
    fam.base.check_subset(window)
    extent = 0
    for i, c in enumerate(fam.family.members):
        if not c & window:
            extent |= 1 << i
    return SubbasisElement("box", window, extent)


def diamond_of(fam: HyperFamily, window: int) -> SubbasisElement:
    """Members hitting the window: {C : C meets window}."""
    fam.base.check_subset(window)
    extent = 0
    for i, c in enumerate(fam.family.members):
        if c & window:
            extent |= 1 << i
    return SubbasisElement("diamond", window, extent)


def filter_to_upset(dual: DualSpace, filter_bits: int) -> int:
    """The closed upset of a filter: intersection of a+ over its members."""
    if not is_filter(dual.lattice, filter_bits):
        raise HyperdlError("filter_to_upset needs a filter")
    out = dual.space.full
    for a in bit_indices(filter_bits):
        out &= dual.aplus[a]
    return out


def upset_to_filter(dual: DualSpace, upset_bits: int) -> int:
    """The filter of a closed upset: {a : C within a+}."""
    if not dual.space.is_upset(upset_bits):
        raise HyperdlError("upset_to_filter needs an upset of the dual space")
    out = 0
    for a in range(dual.lattice.n):
        if not (upset_bits & ~dual.aplus[a]):
            out |= 1 << a
    return out


def ideal_to_downset(dual: DualSpace, ideal_bits: int) -> int:
    out = dual.space.full
    for a in bit_indices(ideal_bits):
        out &= dual.aminus(a)
    return out


def downset_to_ideal(dual: DualSpace, downset_bits: int) -> int:
    out = 0
    for a in range(dual.lattice.n):
        if not (downset_bits & ~dual.aminus(a)):
            out |= 1 << a
    return out


def filter_correspondence_report(lat: DistLattice, dual: DualSpace | None = None) -> Report:
    """Filters <-> closed upsets are mutually inverse antitone bijections,
    and likewise ideals <-> closed downsets."""
    from .lattices import ideals, priestley_dual
    dual = dual or priestley_dual(lat)
    rep = Report("filters-match-closed-upsets")
    fam = filters(lat)
    upsets = dual.space.upsets()
    images = [filter_to_upset(dual, f) for f in fam.members]
    rep.check(sorted(images) == sorted(upsets), f"L(n={lat.n})",
              "filter images are exactly the closed upsets")
    for f, c in zip(fam.members, images):
        rep.check(upset_to_filter(dual, c) == f, f"L(n={lat.n})",
                  "round trip filter -> upset -> filter", bin(f))
    for c in upsets:
        rep.check(filter_to_upset(dual, upset_to_filter(dual, c)) == c, f"L(n={lat.n})",
                  "round trip upset -> filter -> upset", bin(c))
    for i, f in enumerate(fam.members):
        for j, g in enumerate(fam.members):
            if not (f & ~g):
                rep.check(not (images[j] & ~images[i]), f"L(n={lat.n})",
                          "filter map is antitone", f"({bin(f)}, {bin(g)})")
    idl = ideals(lat)
    idl_images = [ideal_to_downset(dual, i) for i in idl.members]
    rep.check(sorted(idl_images) == sorted(dual.space.downsets()), f"L(n={lat.n})",
              "ideal images are exactly the closed downsets")
    for ib, c in zip(idl.members, idl_images):
        rep.check(downset_to_ideal(dual, c) == ib, f"L(n={lat.n})",
                  "round trip ideal -> downset -> ideal", bin(ib))
    for i, a in enumerate(idl.members):
        for j, b in enumerate(idl.members):
            if not (a & ~b):
                rep.check(not (idl_images[j] & ~idl_images[i]), f"L(n={lat.n})",
                          "ideal map is antitone")
    return rep


def filter_space_transport_report(lat: DistLattice, dual: DualSpace | None = None) -> Report:
    """The upset-correspondence image of {F : a in F} is the miss set of a-,
    and of its complement the hit set of a-, inside the closed-upset family."""
    from .lattices import priestley_dual
    dual = dual or priestley_dual(lat)
    rep = Report("filter-subbasis-transport")
    fam_f = filters(lat)
    upset_family = hyper_family(dual.space, FAMILY_UPSETS)
    index = upset_family.family.member_index()
    for a in range(lat.n):
        in_image = 0
        out_image = 0
        for f in fam_f.members:
            target = index[filter_to_upset(dual, f)]
            if f >> a & 1:
                in_image |= 1 << target
            else:
                out_image |= 1 << target
        box = box_of(upset_family, dual.aminus(a)).extent
        dia = diamond_of(upset_family, dual.aminus(a)).extent
        rep.check(in_image == box, f"L(n={lat.n})", "image of a-in-F is the miss set of a-",
                  lat.name_of(a))
        rep.check(out_image == dia, f"L(n={lat.n})", "image of a-not-in-F is the hit set of a-",
                  lat.name_of(a))
    return rep


def box_basis_report(lat: DistLattice, dual: DualSpace | None = None) -> Report:
    """Element-window miss sets are intersection-closed and exhaust every
    downset-window miss set (finite content of the basis statement)."""
    from .lattices import priestley_dual
    dual = dual or priestley_dual(lat)
    rep = Report("miss-sets-form-a-basis")
    fam = hyper_family(dual.space, FAMILY_UPSETS)
    boxes = {a: box_of(fam, dual.aminus(a)).extent for a in range(lat.n)}
    for a in range(lat.n):
        for b in range(lat.n):
            rep.check(boxes[a] & boxes[b] == boxes[lat.meet[a][b]], f"L(n={lat.n})",
                      "miss sets intersect to a miss set",
                      f"({lat.name_of(a)}, {lat.name_of(b)})")
    for k in dual.space.downsets():
        want = box_of(fam, k).extent
        got = 0
        for a in range(lat.n):
            if not (k & ~dual.aminus(a)):
                got |= boxes[a]
        rep.check(got == want, f"L(n={lat.n})",
                  "downset-window miss set is a union of element miss sets", bin(k))
    return rep


def em_subbasis_report(x: Poset) -> Report:
    """Against the Egli-Milner order on all closed sets: a+ miss sets and a-
    hit sets are downsets, their complements upsets, and incomparability is
    witnessed by one of the two separation patterns."""
    rep = Report("egli-milner-subbasis")
    cu = upset_lattice(x)
    fam = hyper_family(x, FAMILY_ALL)
    members = fam.family.members
    m = len(members)

    def is_em_downset(extent: int) -> bool:
        return all(not (fam.family.leq[i] >> j & 1) or (extent >> i & 1)
                   for j in bit_indices(extent) for i in range(m))

    def is_em_upset(extent: int) -> bool:
        return all(extent >> j & 1
                   for i in bit_indices(extent) for j in bit_indices(fam.family.leq[i]))

    plus = {a: cu.sets[a] for a in range(cu.n)}
    minus = {a: cu.sets[a] ^ x.full for a in range(cu.n)}
    for a in range(cu.n):
        rep.check(is_em_downset(box_of(fam, plus[a]).extent), f"X(n={x.n})",
                  "miss set of an upset window is an EM downset", bin(plus[a]))
        rep.check(is_em_downset(diamond_of(fam, minus[a]).extent), f"X(n={x.n})",
                  "hit set of a downset window is an EM downset", bin(minus[a]))
        rep.check(is_em_upset(box_of(fam, minus[a]).extent), f"X(n={x.n})",
                  "miss set of a downset window is an EM upset", bin(minus[a]))
        rep.check(is_em_upset(diamond_of(fam, plus[a]).extent), f"X(n={x.n})",
                  "hit set of an upset window is an EM upset", bin(plus[a]))
    for i, a_set in enumerate(members):
        for j, b_set in enumerate(members):
            if fam.family.leq[i] >> j & 1:
                continue
            separated = any(
                (a_set & plus[a] and not b_set & plus[a])
                or (not a_set & minus[a] and b_set & minus[a])
                for a in range(cu.n))
            rep.check(separated, f"X(n={x.n})", "incomparable members are separated",
                      f"({bin(a_set)}, {bin(b_set)})")
    return rep


def convex_quotient_iso(x: Poset):
    """Quotient of (all closed sets, EM) by mutual comparability, shown
    order-isomorphic to the convex family via the hull map.

    Returns (quotient, class->convex-member mapping, report)."""
    rep = Report("quotient-matches-convex-family")
    fam = hyper_family(x, FAMILY_ALL)
    quot = em_quotient(x, fam.family)
    conv = hyper_family(x, FAMILY_CONVEX)
    cindex = conv.family.member_index()
    mapping = []
    for cls in quot.classes:
        hulls = {x.convex_hull(fam.family.members[i]) for i in cls}
        if len(hulls) != 1:
            rep.fail(f"X(n={x.n})", "class members share one hull", str(cls))
            hulls = {min(hulls)}
        h = hulls.pop()
        if h not in cindex:
            rep.fail(f"X(n={x.n})", "hull lands in the convex family", bin(h))
            mapping.append(-1)
        else:
            mapping.append(cindex[h])
    rep.check(sorted(mapping) == list(range(len(conv.family))), f"X(n={x.n})",
              "hull map is a bijection of classes onto convex members")
    for i in range(len(quot.classes)):
        for j in range(len(quot.classes)):
            if mapping[i] < 0 or mapping[j] < 0:
                continue
            rep.check(quot.order.leq(i, j) == bool(conv.family.leq[mapping[i]] >> mapping[j] & 1),
                      f"X(n={x.n})", "hull map is an order-iso", f"classes ({i}, {j})")
    for midx, s in enumerate(fam.family.members):
        cls = quot.proj[midx]
        rep.check(mapping[cls] == cindex.get(x.convex_hull(s), -2), f"X(n={x.n})",
                  "hull map after quotient projection is the convex hull", bin(s))
    ok = order_iso_find(quot.order, conv.family.poset()) is not None
    rep.check(ok, f"X(n={x.n})", "quotient order isomorphic to convex order")
    return quot, tuple(mapping), rep
