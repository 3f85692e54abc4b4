"""Free lattice constructions over a distributive lattice and their spectra.

Three independent realizations of the free lattice generated by box/diamond
symbols modulo the positive-modal-logic relations:

  * concrete   — the sublattice of the powerset of the free Boolean extension
                 generated by principal-downset boxes and their complements;
  * convex     — clopen upsets of the space of convex closed subsets;
  * pairs      — clopen upsets of the space of weakly prime filter/ideal pairs.

All three are lattices of sets (bitmasks), so meet/join are &/| and the order
is inclusion.  Their join-irreducibles are the prime-filter spectra, which is
what the translation maps between pairs, convex sets and spectra act on.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .errors import HyperdlError, InvalidHomError, LatticeError, ParseError, ResourceGuardError
from .hyperspaces import FAMILY_CONVEX, HyperFamily, hyper_family
from .lattices import DistLattice, DualSpace, LatticeHom, downset_lattice, priestley_dual
from .posets import Poset, bit_indices, order_iso_find
from .reports import Report

EXHAUSTIVE_PAIR_BOUND = 1024
SAMPLED_PAIRS = 2000
DEFAULT_CLOSURE_BOUND = 1 << 16


# ---------------------------------------------------------------------------
# free lattice over a meet-semilattice (downsets) and a join-semilattice


@dataclass(frozen=True)
class GeneratedLattice:
    """A lattice together with the generator map from its source structure."""

    lattice: DistLattice
    gen: tuple[int, ...]


def _require_meet_semilattice(m: Poset) -> None:
    if m.top() is None:
        raise LatticeError("meet-semilattice needs a top element")
    for i in range(m.n):
        for j in range(m.n):
            lows = m.down[i] & m.down[j]
            if not any(not (lows & ~m.down[k]) for k in bit_indices(lows)):
                raise LatticeError(f"elements {i}, {j} have no meet")


def semilattice_meet(m: Poset, i: int, j: int) -> int:
    lows = m.down[i] & m.down[j]
    for k in bit_indices(lows):
        if not (lows & ~m.down[k]):
            return k
    raise LatticeError(f"elements {i}, {j} have no meet")


def box_lattice(m: Poset) -> GeneratedLattice:
    """Free bounded distributive lattice over a unital meet-semilattice:
    all downsets under inclusion, generated by the principal downsets."""
    _require_meet_semilattice(m)
    lat = downset_lattice(m)
    index = {s: i for i, s in enumerate(lat.sets)}
    gen = tuple(index[m.down[a]] for a in range(m.n))
    for a in range(m.n):
        for b in range(m.n):
            if lat.meet[gen[a]][gen[b]] != gen[semilattice_meet(m, a, b)]:
                raise LatticeError("principal downsets do not embed the semilattice")
    return GeneratedLattice(lat, gen)


def is_meet_unital_map(m: Poset, dst: DistLattice, mapping) -> bool:
    if mapping[m.top()] != dst.top:
        return False
    return all(mapping[semilattice_meet(m, a, b)] == dst.meet[mapping[a]][mapping[b]]
               for a in range(m.n) for b in range(m.n))


def box_universal_extend(m: Poset, mapping, dst: DistLattice,
                         boxm: GeneratedLattice | None = None) -> LatticeHom:
    """Extend a unital meet-semilattice map along the principal-downset
    generators: a downset goes to the join of the images of its members.

    The extension is verified to be a bounded lattice hom agreeing with the
    map on generators, and to be forced at every element (each downset is the
    join of the principal downsets below it), which is the uniqueness claim.
    """
    mapping = tuple(mapping)
    if not is_meet_unital_map(m, dst, mapping):
        raise InvalidHomError("map is not a unital meet-semilattice hom")
    boxm = boxm or box_lattice(m)
    lat = boxm.lattice
    ext = []
    for s in lat.sets:
        ext.append(dst.join_all(mapping[a] for a in bit_indices(s)))
    hom = LatticeHom(lat, dst, tuple(ext)).require_valid()
    for a in range(m.n):
        if hom.mapping[boxm.gen[a]] != mapping[a]:
            raise InvalidHomError(f"extension disagrees with the map at generator {a}")
    for i, s in enumerate(lat.sets):
        if lat.join_all(boxm.gen[a] for a in bit_indices(s)) != i:
            raise LatticeError(f"downset {bin(s)} is not the join of its principal downsets")
    return hom


def _reverse_family_lattice(sets) -> DistLattice:
    sets = list(sets)
    index = {s: i for i, s in enumerate(sets)}
    rows = []
    for a in sets:
        row = 0
        for j, b in enumerate(sets):
            if not (b & ~a):
                row |= 1 << j
        rows.append(row)
    order = Poset(rows)
    meet = tuple(tuple(index[a | b] for b in sets) for a in sets)
    join = tuple(tuple(index[a & b] for b in sets) for a in sets)
    bot = max(range(len(sets)), key=lambda i: sets[i].bit_count())
    top = index[0]
    return DistLattice(order, meet, join, bot, top, sets=sets)


def diamond_lattice(n: Poset) -> GeneratedLattice:
    """Free bounded distributive lattice over a join-semilattice with zero:
    all upsets under reverse inclusion, generated by the principal upsets."""
    _require_meet_semilattice(n.reverse())
    lat = _reverse_family_lattice(n.upsets())
    index = {s: i for i, s in enumerate(lat.sets)}
    gen = tuple(index[n.up[a]] for a in range(n.n))
    return GeneratedLattice(lat, gen)


def diamond_matches_dual_box_report(n: Poset) -> Report:
    """The diamond construction agrees with dualizing the box construction of
    the order-dual (same sets, reversed order, matching generators)."""
    rep = Report("diamond-is-dual-box-of-dual")
    dia = diamond_lattice(n)
    box_of_dual = box_lattice(n.reverse())
    flipped = box_of_dual.lattice.dual()
    iso = order_iso_find(dia.lattice.order, flipped.order)
    if not rep.check(iso is not None, f"N(n={n.n})", "lattices are order-isomorphic"):
        return rep
    sets = box_of_dual.lattice.sets
    for a in range(n.n):
        rep.check(sets[box_of_dual.gen[a]] == dia.lattice.sets[dia.gen[a]],
                  f"N(n={n.n})", "generators carry the same upset", str(a))
        rep.check(iso[dia.gen[a]] == box_of_dual.gen[a],
                  f"N(n={n.n})", "generator transport under the iso", str(a))
    return rep


# ---------------------------------------------------------------------------
# weakly prime pairs


@dataclass(frozen=True)
class WeaklyPrimeFamily:
    """All weakly prime (filter, ideal) pairs with the product-style order
    (F, I) <= (F', I') iff F within F' and I' within I."""

    lattice: DistLattice
    pairs: tuple[tuple[int, int], ...]
    order: Poset

    def __len__(self):
        return len(self.pairs)

    def box_up(self, a: int) -> int:
        return _mask(i for i, (f, _) in enumerate(self.pairs) if f >> a & 1)

    def box_down(self, a: int) -> int:
        return self.box_up(a) ^ (1 << len(self.pairs)) - 1

    def dia_up(self, a: int) -> int:
        return _mask(i for i, (_, idl) in enumerate(self.pairs) if not idl >> a & 1)

    def dia_down(self, a: int) -> int:
        return self.dia_up(a) ^ (1 << len(self.pairs)) - 1


def _mask(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def is_weakly_prime(lat: DistLattice, fbits: int, ibits: int) -> bool:
    """a v b in F implies a in F or b not in I; a ^ b in I implies a not in F
    or b in I."""
    for a in range(lat.n):
        for b in range(lat.n):
            if fbits >> lat.join[a][b] & 1 and not fbits >> a & 1 and ibits >> b & 1:
                return False
            if ibits >> lat.meet[a][b] & 1 and fbits >> a & 1 and not ibits >> b & 1:
                return False
    return True


def weakly_prime_pairs(lat: DistLattice) -> WeaklyPrimeFamily:
    cands = []
    fmembers = sorted({lat.order.up[u] for u in range(lat.n)}, key=lambda m: (m.bit_count(), m))
    imembers = sorted({lat.order.down[v] for v in range(lat.n)}, key=lambda m: (m.bit_count(), m))
    for f in fmembers:
        for i in imembers:
            if is_weakly_prime(lat, f, i):
                cands.append((f, i))
    rows = []
    for f, i in cands:
        row = 0
        for j, (g, k) in enumerate(cands):
            if not (f & ~g) and not (k & ~i):
                row |= 1 << j
        rows.append(row)
    return WeaklyPrimeFamily(lat, tuple(cands), Poset(rows))


def pair_to_convex(dual: DualSpace, fbits: int, ibits: int) -> int:
    """Intersection of the a+ over the filter and the a- over the ideal."""
    if not is_weakly_prime(dual.lattice, fbits, ibits):
        raise HyperdlError("pair_to_convex needs a weakly prime pair")
    out = dual.space.full
    for a in bit_indices(fbits):
        out &= dual.aplus[a]
    for a in bit_indices(ibits):
        out &= dual.aminus(a)
    return out


def convex_to_pair(dual: DualSpace, c: int) -> tuple[int, int]:
    """({a : C within a+}, {a : C within a-})."""
    if not dual.space.is_convex(c):
        raise HyperdlError("convex_to_pair needs a convex subset")
    f = _mask(a for a in range(dual.lattice.n) if not (c & ~dual.aplus[a]))
    i = _mask(a for a in range(dual.lattice.n) if not (c & ~dual.aminus(a)))
    return f, i


def pair_convex_report(lat: DistLattice, dual: DualSpace | None = None,
                       wpf: WeaklyPrimeFamily | None = None,
                       conv: HyperFamily | None = None) -> Report:
    """Pairs <-> convex closed sets are mutually inverse order-isomorphisms
    with the four stated subbasis transports."""
    dual = dual or priestley_dual(lat)
    wpf = wpf or weakly_prime_pairs(lat)
    conv = conv or hyper_family(dual.space, FAMILY_CONVEX)
    rep = Report("pairs-match-convex-sets")
    cindex = conv.family.member_index()
    images = []
    for f, i in wpf.pairs:
        c = pair_to_convex(dual, f, i)
        if c not in cindex:
            rep.fail(f"L(n={lat.n})", "pair image is convex closed", bin(c))
            images.append(-1)
            continue
        images.append(cindex[c])
        rep.check(convex_to_pair(dual, c) == (f, i), f"L(n={lat.n})",
                  "round trip pair -> convex -> pair", bin(f))
    rep.check(sorted(images) == list(range(len(conv.family))), f"L(n={lat.n})",
              "pair map is a bijection onto convex members")
    for c in conv.family.members:
        f, i = convex_to_pair(dual, c)
        rep.check(pair_to_convex(dual, f, i) == c, f"L(n={lat.n})",
                  "round trip convex -> pair -> convex", bin(c))
        rep.check((f, i) in wpf.pairs, f"L(n={lat.n})",
                  "convex image is weakly prime", bin(c))
    for p in range(len(wpf)):
        for q in range(len(wpf)):
            rep.check(wpf.order.leq(p, q)
                      == bool(conv.family.leq[images[p]] >> images[q] & 1),
                      f"L(n={lat.n})", "pair map is an order-iso", f"({p}, {q})")
    for a in range(lat.n):
        box_minus = _mask(i for i, c in enumerate(conv.family.members) if not c & dual.aminus(a))
        dia_minus = box_minus ^ (1 << len(conv.family)) - 1
        dia_plus = _mask(i for i, c in enumerate(conv.family.members) if c & dual.aplus[a])
        box_plus = dia_plus ^ (1 << len(conv.family)) - 1
        transported = {name: _mask(images[p] for p in bit_indices(src))
                       for name, src in (("bu", wpf.box_up(a)), ("bd", wpf.box_down(a)),
                                         ("du", wpf.dia_up(a)), ("dd", wpf.dia_down(a)))}
        rep.check(transported["bu"] == box_minus, f"L(n={lat.n})",
                  "a-in-F transports to the miss set of a-", lat.name_of(a))
        rep.check(transported["bd"] == dia_minus, f"L(n={lat.n})",
                  "a-not-in-F transports to the hit set of a-", lat.name_of(a))
        rep.check(transported["du"] == dia_plus, f"L(n={lat.n})",
                  "a-not-in-I transports to the hit set of a+", lat.name_of(a))
        rep.check(transported["dd"] == box_plus, f"L(n={lat.n})",
                  "a-in-I transports to the miss set of a+", lat.name_of(a))
    return rep


# ---------------------------------------------------------------------------
# realizations of the free modal lattice


@dataclass(frozen=True)
class ModalRealization:
    """A lattice of point-set bitmasks realizing the free modal lattice.

    elements are closed under & and |; ji lists the union-irreducible
    members (the prime-filter spectrum); gen_box/gen_dia give the generator
    images per source-lattice element.
    """

    kind: str
    npoints: int
    elements: tuple[int, ...]
    ji: tuple[int, ...]
    gen_box: tuple[int, ...]
    gen_dia: tuple[int, ...]

    def __len__(self):
        return len(self.elements)

    @property
    def bot(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.elements[-1]

    def index(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def ji_below(self, w: int) -> int:
        return _mask(i for i, j in enumerate(self.ji) if not (j & ~w))

    def spectrum_poset(self) -> Poset:
        """Prime filters {w : j <= w} under inclusion = ji under reverse inclusion."""
        rows = []
        for a in self.ji:
            row = 0
            for q, b in enumerate(self.ji):
                if not (b & ~a):
                    row |= 1 << q
            rows.append(row)
        return Poset(rows)


def _union_irreducibles(members: list[int]) -> list[int]:
    """Members that are not the union of the strictly smaller members."""
    members = sorted(members, key=lambda m: (m.bit_count(), m))
    out = []
    for i, m in enumerate(members):
        u = 0
        for m2 in members[:i]:
            if m2 != m and not (m2 & ~m):
                u |= m2
        if u != m:
            out.append(m)
    return out


def _close_under_unions(ji, max_elements: int) -> list[int]:
    elems = {0}
    for j in ji:
        elems |= {e | j for e in elems}
        if len(elems) > max_elements:
            raise ResourceGuardError(f"closure exceeds {max_elements} elements")
    return sorted(elems, key=lambda m: (m.bit_count(), m))


def concrete_modal_lattice(lat: DistLattice, dual: DualSpace | None = None,
                           max_elements: int = DEFAULT_CLOSURE_BOUND) -> ModalRealization:
    """Sublattice of the powerset of the free Boolean extension generated by
    the principal-downset boxes and complement diamonds, closed under meets
    then unions (equivalent to the pairwise fixpoint by distributivity)."""
    dual = dual or priestley_dual(lat)
    nx = dual.space.n
    npoints = 1 << nx
    if npoints > 64:
        raise ResourceGuardError(f"powerset ambient over 2^{nx} points")
    gen_box = []
    gen_dia = []
    for a in range(lat.n):
        plus = dual.aplus[a]
        box = 0
        dia = 0
        for s in range(npoints):
            if not (s & ~plus):
                box |= 1 << s
            if s & plus:
                dia |= 1 << s
        gen_box.append(box)
        gen_dia.append(dia)
    full = (1 << npoints) - 1
    meets = {full}
    for g in gen_box + gen_dia:
        meets |= {m & g for m in meets}
        if len(meets) > max_elements:
            raise ResourceGuardError(f"meet closure exceeds {max_elements} elements")
    ji = _union_irreducibles(list(meets))
    elements = _close_under_unions(ji, max_elements)
    return ModalRealization("concrete", npoints, tuple(elements), tuple(ji),
                            tuple(gen_box), tuple(gen_dia))


def _upsets_realization(kind: str, order: Poset, gen_box, gen_dia,
                        max_elements: int) -> ModalRealization:
    for a, g in enumerate(gen_box):
        if not order.is_upset(g):
            raise HyperdlError(f"box generator {a} is not an upset of the {kind} space")
    for a, g in enumerate(gen_dia):
        if not order.is_upset(g):
            raise HyperdlError(f"diamond generator {a} is not an upset of the {kind} space")
    ji = sorted({order.up[i] for i in range(order.n)}, key=lambda m: (m.bit_count(), m))
    elements = _close_under_unions(ji, max_elements)
    return ModalRealization(kind, order.n, tuple(elements), tuple(ji),
                            tuple(gen_box), tuple(gen_dia))


def convex_modal_lattice(lat: DistLattice, dual: DualSpace | None = None,
                         conv: HyperFamily | None = None,
                         max_elements: int = DEFAULT_CLOSURE_BOUND) -> ModalRealization:
    """Clopen upsets of the convex-closed-set space, generated by the miss
    sets of the a- and the hit sets of the a+."""
    dual = dual or priestley_dual(lat)
    conv = conv or hyper_family(dual.space, FAMILY_CONVEX)
    members = conv.family.members
    gen_box = [_mask(i for i, c in enumerate(members) if not c & dual.aminus(a))
               for a in range(lat.n)]
    gen_dia = [_mask(i for i, c in enumerate(members) if c & dual.aplus[a])
               for a in range(lat.n)]
    return _upsets_realization("convex", conv.family.poset(), gen_box, gen_dia, max_elements)


def pairs_modal_lattice(lat: DistLattice, wpf: WeaklyPrimeFamily | None = None,
                        max_elements: int = DEFAULT_CLOSURE_BOUND) -> ModalRealization:
    """Clopen upsets of the weakly-prime-pair space, generated by the
    membership sets of the filter and ideal components."""
    wpf = wpf or weakly_prime_pairs(lat)
    gen_box = [wpf.box_up(a) for a in range(lat.n)]
    gen_dia = [wpf.dia_up(a) for a in range(lat.n)]
    return _upsets_realization("pairs", wpf.order, gen_box, gen_dia, max_elements)


def generator_relations_report(lat: DistLattice, route: ModalRealization) -> Report:
    """The six defining relations, plus the interaction laws of the
    (join-preserving, meet-preserving) generator pair."""
    rep = Report(f"generator-relations-{route.kind}")
    gb, gd = route.gen_box, route.gen_dia
    rep.check(gb[lat.top] == route.top, f"L(n={lat.n})", "box of top is top")
    rep.check(gd[lat.bot] == route.bot, f"L(n={lat.n})", "diamond of bottom is bottom")
    for a in range(lat.n):
        for b in range(lat.n):
            rep.check(gb[a] & gb[b] == gb[lat.meet[a][b]], f"L(n={lat.n})",
                      "box preserves meets", f"({a}, {b})")
            rep.check(gd[a] | gd[b] == gd[lat.join[a][b]], f"L(n={lat.n})",
                      "diamond preserves joins", f"({a}, {b})")
            rep.check(not (gb[lat.join[a][b]] & ~(gb[a] | gd[b])), f"L(n={lat.n})",
                      "box of join below box-or-diamond", f"({a}, {b})")
            rep.check(not ((gb[a] & gd[b]) & ~gd[lat.meet[a][b]]), f"L(n={lat.n})",
                      "box-and-diamond below diamond of meet", f"({a}, {b})")
    return rep


# ---------------------------------------------------------------------------
# translations between spectra, pairs and convex sets


def spectrum_to_pairs(lat: DistLattice, route: ModalRealization,
                      wpf: WeaklyPrimeFamily | None = None) -> tuple[tuple[int, ...], Report]:
    """Each spectrum point G (a join-irreducible j, G = {w : j <= w}) goes to
    ({a : box_a in G}, {a : dia_a not in G}); verified an order-iso onto the
    weakly prime pairs with the four subbasis transports."""
    wpf = wpf or weakly_prime_pairs(lat)
    rep = Report(f"spectrum-matches-pairs-{route.kind}")
    pair_index = {p: i for i, p in enumerate(wpf.pairs)}
    spectrum = route.spectrum_poset()
    mapping = []
    for j in route.ji:
        f = _mask(a for a in range(lat.n) if not (j & ~route.gen_box[a]))
        i = _mask(a for a in range(lat.n) if j & ~route.gen_dia[a])
        if not rep.check(is_weakly_prime(lat, f, i), f"L(n={lat.n})",
                         "spectrum point yields a weakly prime pair", bin(j)):
            mapping.append(-1)
            continue
        if (f, i) not in pair_index:
            rep.fail(f"L(n={lat.n})", "pair is among the enumerated pairs", bin(j))
            mapping.append(-1)
            continue
        mapping.append(pair_index[(f, i)])
    rep.check(sorted(mapping) == list(range(len(wpf))), f"L(n={lat.n})",
              "spectrum-to-pairs is a bijection")
    if rep.passed:
        for p in range(len(route.ji)):
            for q in range(len(route.ji)):
                rep.check(spectrum.leq(p, q) == wpf.order.leq(mapping[p], mapping[q]),
                          f"L(n={lat.n})", "spectrum-to-pairs is an order-iso", f"({p}, {q})")
        for a in range(lat.n):
            got_box = _mask(mapping[p] for p, j in enumerate(route.ji)
                            if not (j & ~route.gen_box[a]))
            got_dia = _mask(mapping[p] for p, j in enumerate(route.ji)
                            if not (j & ~route.gen_dia[a]))
            rep.check(got_box == wpf.box_up(a), f"L(n={lat.n})",
                      "box membership transports to a-in-F", lat.name_of(a))
            rep.check(got_dia == wpf.dia_up(a), f"L(n={lat.n})",
                      "diamond membership transports to a-not-in-I", lat.name_of(a))
    return tuple(mapping), rep


def spectrum_to_convex(lat: DistLattice, route: ModalRealization,
                       dual: DualSpace | None = None,
                       conv: HyperFamily | None = None) -> tuple[tuple[int, ...], Report]:
    """Each spectrum point goes to the intersection of the a+ with box_a in G
    and the a- with dia_a outside G; verified equal to composing the pair
    translation with the pair->convex map, an order-iso, and transporting the
    four subbasis classes."""
    dual = dual or priestley_dual(lat)
    conv = conv or hyper_family(dual.space, FAMILY_CONVEX)
    rep = Report(f"spectrum-matches-convex-{route.kind}")
    cindex = conv.family.member_index()
    spectrum = route.spectrum_poset()
    wpf = weakly_prime_pairs(lat)
    pair_map, pair_rep = spectrum_to_pairs(lat, route, wpf)
    rep.absorb(pair_rep)
    mapping = []
    for p, j in enumerate(route.ji):
        c = dual.space.full
        for a in range(lat.n):
            if not (j & ~route.gen_box[a]):
                c &= dual.aplus[a]
            if j & ~route.gen_dia[a]:
                c &= dual.aminus(a)
        if pair_map[p] >= 0:
            f, i = wpf.pairs[pair_map[p]]
            rep.check(c == pair_to_convex(dual, f, i), f"L(n={lat.n})",
                      "direct formula agrees with the pair composite", bin(j))
        if c not in cindex:
            rep.fail(f"L(n={lat.n})", "spectrum image is convex closed", bin(c))
            mapping.append(-1)
            continue
        mapping.append(cindex[c])
    rep.check(sorted(mapping) == list(range(len(conv.family))), f"L(n={lat.n})",
              "spectrum-to-convex is a bijection")
    if rep.passed:
        for p in range(len(route.ji)):
            for q in range(len(route.ji)):
                rep.check(spectrum.leq(p, q)
                          == bool(conv.family.leq[mapping[p]] >> mapping[q] & 1),
                          f"L(n={lat.n})", "spectrum-to-convex is an order-iso", f"({p}, {q})")
        for a in range(lat.n):
            box_minus = _mask(i for i, c in enumerate(conv.family.members)
                              if not c & dual.aminus(a))
            box_plus = _mask(i for i, c in enumerate(conv.family.members)
                             if not c & dual.aplus[a])
            dia_plus = _mask(i for i, c in enumerate(conv.family.members) if c & dual.aplus[a])
            got_box = _mask(mapping[p] for p, j in enumerate(route.ji)
                            if not (j & ~route.gen_box[a]))
            got_dia_out = _mask(mapping[p] for p, j in enumerate(route.ji)
                                if j & ~route.gen_dia[a])
            got_dia = _mask(mapping[p] for p, j in enumerate(route.ji)
                            if not (j & ~route.gen_dia[a]))
            rep.check(got_box == box_minus, f"L(n={lat.n})",
                      "box membership maps onto the miss set of a-", lat.name_of(a))
            rep.check(got_dia == dia_plus, f"L(n={lat.n})",
                      "diamond membership maps onto the hit set of a+", lat.name_of(a))
            rep.check(got_dia_out == box_plus, f"L(n={lat.n})",
                      "diamond non-membership maps onto the miss set of a+", lat.name_of(a))
    return tuple(mapping), rep


def route_iso(r1: ModalRealization, r2: ModalRealization,
              rng: random.Random | None = None) -> tuple[dict[int, int] | None, Report]:
    """Isomorphism r1 -> r2 fixing the generators, built by matching each
    join-irreducible to the one lying under exactly the same generators.

    Order preservation is verified on all element pairs when the lattices are
    small; for larger ones on the join-irreducibles, all generator pairs and
    a seeded random sample (see ledger note on bounded verification).
    """
    rng = rng or random.Random(0)
    rep = Report(f"route-iso-{r1.kind}-vs-{r2.kind}")
    if not rep.check(len(r1) == len(r2), "routes", "realizations have equal size",
                     f"{len(r1)} vs {len(r2)}"):
        return None, rep
    ngen = len(r1.gen_box)

    def profile(route, j):
        p = 0
        for a in range(ngen):
            if not (j & ~route.gen_box[a]):
                p |= 1 << a
            if not (j & ~route.gen_dia[a]):
                p |= 1 << (a + ngen)
        return p

    prof2 = {}
    for j in r2.ji:
        prof2.setdefault(profile(r2, j), []).append(j)
    phi = {}
    for j in r1.ji:
        cands = prof2.get(profile(r1, j), [])
        if len(cands) != 1:
            rep.fail("routes", "join-irreducible has a unique profile match", bin(j))
            return None, rep
        phi[j] = cands[0]
    if not rep.check(len(set(phi.values())) == len(r2.ji) == len(r1.ji), "routes",
                     "join-irreducible matching is a bijection"):
        return None, rep
    for j1 in r1.ji:
        for j2 in r1.ji:
            rep.check((not (j1 & ~j2)) == (not (phi[j1] & ~phi[j2])), "routes",
                      "matching preserves the spectrum order", f"({bin(j1)}, {bin(j2)})")

    def eps(w):
        out = 0
        for j in r1.ji:
            if not (j & ~w):
                out |= phi[j]
        return out

    for a in range(ngen):
        rep.check(eps(r1.gen_box[a]) == r2.gen_box[a], "routes",
                  "box generators transport exactly", str(a))
        rep.check(eps(r1.gen_dia[a]) == r2.gen_dia[a], "routes",
                  "diamond generators transport exactly", str(a))
    elem2 = set(r2.elements)
    if len(r1) <= EXHAUSTIVE_PAIR_BOUND:
        images = [eps(w) for w in r1.elements]
        rep.check(len(set(images)) == len(r1), "routes", "transport is injective")
        rep.check(all(v in elem2 for v in images), "routes", "transport lands in the target")
        for i, v in enumerate(r1.elements):
            for k, w in enumerate(r1.elements):
                rep.check((not (v & ~w)) == (not (images[i] & ~images[k])), "routes",
                          "transport preserves and reflects order")
    else:
        pairs = [(rng.randrange(len(r1)), rng.randrange(len(r1))) for _ in range(SAMPLED_PAIRS)]
        for i, k in pairs:
            v, w = r1.elements[i], r1.elements[k]
            ev, ew = eps(v), eps(w)
            rep.check(ev in elem2 and ew in elem2, "routes", "sampled transport lands in target")
            rep.check((not (v & ~w)) == (not (ev & ~ew)), "routes",
                      "sampled transport preserves and reflects order")
            rep.check(eps(v & w) == (ev & ew) and eps(v | w) == (ev | ew), "routes",
                      "sampled transport preserves meet and join")
        for a in range(ngen):
            for b in range(ngen):
                va, vb = r1.gen_box[a], r1.gen_dia[b]
                rep.check(eps(va & vb) == (eps(va) & eps(vb)), "routes",
                          "generator-pair meets transport", f"({a}, {b})")
                rep.check(eps(va | vb) == (eps(va) | eps(vb)), "routes",
                          "generator-pair joins transport", f"({a}, {b})")
    return (phi if rep.passed else None), rep


def free_to_clopen_iso(lat: DistLattice, route: ModalRealization,
                       dual: DualSpace | None = None,
                       rng: random.Random | None = None) -> tuple[dict[int, int] | None, Report]:
    """Isomorphism from a realization onto the clopen upsets of the convex
    space, sending box_a to the miss set of a- and dia_a to the hit set of a+."""
    dual = dual or priestley_dual(lat)
    target = convex_modal_lattice(lat, dual)
    phi, rep = route_iso(route, target, rng)
    rep.name = f"free-to-clopen-upsets-{route.kind}"
    return phi, rep


def three_route_report(lat: DistLattice, dual: DualSpace | None = None,
                       rng: random.Random | None = None,
                       max_elements: int = DEFAULT_CLOSURE_BOUND) -> Report:
    """Pairwise agreement of the three realizations, with generator transport
    and the defining relations in each."""
    dual = dual or priestley_dual(lat)
    rep = Report(f"three-route-agreement(n={lat.n})")
    concrete = concrete_modal_lattice(lat, dual, max_elements)
    convex = convex_modal_lattice(lat, dual, max_elements=max_elements)
    pairs = pairs_modal_lattice(lat, max_elements=max_elements)
    for route in (concrete, convex, pairs):
        rep.absorb(generator_relations_report(lat, route))
    _, r1 = route_iso(concrete, convex, rng)
    _, r2 = route_iso(convex, pairs, rng)
    _, r3 = route_iso(concrete, pairs, rng)
    rep.absorb(r1)
    rep.absorb(r2)
    rep.absorb(r3)
    return rep


# ---------------------------------------------------------------------------
# term calculus


class Term:
    pass


@dataclass(frozen=True)
class TermConst(Term):
    value: int


@dataclass(frozen=True)
class TermBox(Term):
    elem: int


@dataclass(frozen=True)
class TermDia(Term):
    elem: int


@dataclass(frozen=True)
class TermMeet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class TermJoin(Term):
    left: Term
    right: Term


_TOKEN = re.compile(r"\s*(box|dia|[()&|]|[^()&|\s]+)")


def parse_term(text: str, names: dict[str, int]) -> Term:
    """Grammar: 0 | 1 | box(<elem>) | dia(<elem>) | (t & t) | (t | t)."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        tokens.append(m.group(1))
        pos = m.end()
    if text[pos:].strip():
        raise ParseError(f"unreadable term input near {text[pos:]!r}")
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take(expect=None):
        nonlocal i
        if i >= len(tokens):
            raise ParseError("unexpected end of term")
        tok = tokens[i]
        if expect is not None and tok != expect:
            raise ParseError(f"expected {expect!r}, found {tok!r}")
        i += 1
        return tok

    def atom() -> Term:
        tok = take()
        if tok == "0":
            return TermConst(0)
        if tok == "1":
            return TermConst(1)
        if tok in ("box", "dia"):
            take("(")
            name = take()
            if name not in names:
                raise ParseError(f"unknown lattice element {name!r}")
            take(")")
            return TermBox(names[name]) if tok == "box" else TermDia(names[name])
        if tok == "(":
            left = atom()
            op = take()
            if op not in ("&", "|"):
                raise ParseError(f"expected & or |, found {op!r}")
            right = atom()
            take(")")
            return TermMeet(left, right) if op == "&" else TermJoin(left, right)
        raise ParseError(f"unexpected token {tok!r}")

    out = atom()
    if peek() is not None:
        raise ParseError(f"trailing input from {peek()!r}")
    return out


def term_eval(lat: DistLattice, t: Term, route: ModalRealization) -> int:
    if isinstance(t, TermConst):
        return route.top if t.value else route.bot
    if isinstance(t, TermBox):
        return route.gen_box[t.elem]
    if isinstance(t, TermDia):
        return route.gen_dia[t.elem]
    if isinstance(t, TermMeet):
        return term_eval(lat, t.left, route) & term_eval(lat, t.right, route)
    if isinstance(t, TermJoin):
        return term_eval(lat, t.left, route) | term_eval(lat, t.right, route)
    raise ParseError(f"malformed term {t!r}")


def term_equal(lat: DistLattice, t1: Term, t2: Term,
               route: ModalRealization | None = None) -> bool:
    """Word problem, decided by evaluating both terms in a faithful realization."""
    route = route or concrete_modal_lattice(lat)
    return term_eval(lat, t1, route) == term_eval(lat, t2, route)


def normal_form(lat: DistLattice, w: int, route: ModalRealization) -> str:
    """Canonical join of meet-terms: one meet-term per join-irreducible under
    w, its box part collapsed through the meet, diamond factors minimized."""
    parts = []
    for j in route.ji:
        if j & ~w:
            continue
        box_over = [a for a in range(lat.n) if not (j & ~route.gen_box[a])]
        a0 = lat.meet_all(box_over)
        dias = [b for b in range(lat.n) if not (j & ~route.gen_dia[b])]
        minimal = [b for b in dias
                   if not any(c != b and lat.leq(c, b) for c in dias)]
        factors = []
        if a0 != lat.top:
            factors.append(f"box({lat.name_of(a0)})")
        factors.extend(f"dia({lat.name_of(b)})" for b in sorted(minimal))
        if not factors:
            parts.append("1")
        elif len(factors) == 1:
            parts.append(factors[0])
        else:
            out = factors[0]
            for f in factors[1:]:
                out = f"({out} & {f})"
            parts.append(out)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out = f"({out} | {p})"
    return out


# ---------------------------------------------------------------------------
# functor actions


def free_modal_hom(f: LatticeHom, route_src: ModalRealization,
                   route_dst: ModalRealization) -> tuple[tuple[int, ...], Report]:
    """The hom between realizations sending box_a to box_{f(a)} and dia_a to
    dia_{f(a)}, computed through the join-of-meets normal form; verified a
    bounded lattice hom with the stated generator behavior."""
    f.require_valid()
    lat = f.src
    rep = Report("free-modal-hom")

    def apply(w: int) -> int:
        out = 0
        for j in route_src.ji:
            if j & ~w:
                continue
            box_over = [a for a in range(lat.n) if not (j & ~route_src.gen_box[a])]
            val = route_dst.gen_box[f(lat.meet_all(box_over))]
            for b in range(lat.n):
                if not (j & ~route_src.gen_dia[b]):
                    val &= route_dst.gen_dia[f(b)]
            out |= val
        return out

    mapping = tuple(apply(w) for w in route_src.elements)
    idx = {w: i for i, w in enumerate(route_src.elements)}
    elem_dst = set(route_dst.elements)
    rep.check(all(v in elem_dst for v in mapping), "hom", "images land in the target")
    for a in range(lat.n):
        rep.check(mapping[idx[route_src.gen_box[a]]] == route_dst.gen_box[f(a)],
                  "hom", "box generator behavior", lat.name_of(a))
        rep.check(mapping[idx[route_src.gen_dia[a]]] == route_dst.gen_dia[f(a)],
                  "hom", "diamond generator behavior", lat.name_of(a))
    rep.check(mapping[idx[route_src.bot]] == route_dst.bot, "hom", "bottom preserved")
    rep.check(mapping[idx[route_src.top]] == route_dst.top, "hom", "top preserved")
    if len(route_src) <= EXHAUSTIVE_PAIR_BOUND:
        for i, v in enumerate(route_src.elements):
            for k, w in enumerate(route_src.elements):
                rep.check(mapping[idx[v & w]] == mapping[i] & mapping[k],
                          "hom", "meets preserved")
                rep.check(mapping[idx[v | w]] == mapping[i] | mapping[k],
                          "hom", "joins preserved")
    return mapping, rep


def convex_map(src: Poset, dst: Poset, g, conv_src: HyperFamily | None = None,
               conv_dst: HyperFamily | None = None) -> tuple[int, ...]:
    """Functor action on a monotone map: a convex set goes to the hull of its
    image.  Returns the member-index map; rejects non-monotone inputs."""
    g = tuple(g)
    for i in range(src.n):
        for j in range(src.n):
            if src.leq(i, j) and not dst.leq(g[i], g[j]):
                raise HyperdlError(f"map is not monotone at ({i}, {j})")
    conv_src = conv_src or hyper_family(src, FAMILY_CONVEX)
    conv_dst = conv_dst or hyper_family(dst, FAMILY_CONVEX)
    dindex = conv_dst.family.member_index()
    out = []
    for c in conv_src.family.members:
        image = _mask(g[i] for i in bit_indices(c))
        out.append(dindex[dst.convex_hull(image)])
    return tuple(out)


def convex_map_monotone_report(src: Poset, dst: Poset, g) -> Report:
    rep = Report("convex-functor-monotone")
    conv_src = hyper_family(src, FAMILY_CONVEX)
    conv_dst = hyper_family(dst, FAMILY_CONVEX)
    cm = convex_map(src, dst, g, conv_src, conv_dst)
    for i in range(len(conv_src.family)):
        for j in range(len(conv_src.family)):
            if conv_src.family.leq[i] >> j & 1:
                rep.check(bool(conv_dst.family.leq[cm[i]] >> cm[j] & 1),
                          f"map into X(n={dst.n})", "hull-of-image map is monotone",
                          f"members ({i}, {j})")
    return rep


def naturality_report(f: LatticeHom, dual_src: DualSpace | None = None,
                      dual_dst: DualSpace | None = None) -> Report:
    """The square relating the free construction on a hom with the convex
    functor on its dual map commutes on every generator (which generates)."""
    from .lattices import dual_hom
    f.require_valid()
    lat, m = f.src, f.dst
    dual_l = dual_src or priestley_dual(lat)
    dual_m = dual_dst or priestley_dual(m)
    rep = Report("free-vs-convex-naturality")
    pf = dual_hom(f, dual_l, dual_m)
    conv_x = hyper_family(dual_l.space, FAMILY_CONVEX)
    conv_y = hyper_family(dual_m.space, FAMILY_CONVEX)
    cm = convex_map(dual_m.space, dual_l.space, pf, conv_y, conv_x)
    members_y = conv_y.family.members
    members_x = conv_x.family.members
    for a in range(lat.n):
        fa = f(a)
        lhs_box = _mask(i for i, d in enumerate(members_y) if not d & dual_m.aminus(fa))
        rhs_box = _mask(i for i in range(len(members_y))
                        if not members_x[cm[i]] & dual_l.aminus(a))
        rep.check(lhs_box == rhs_box, f"hom {lat.n}->{m.n}",
                  "box generator square commutes", lat.name_of(a))
        lhs_dia = _mask(i for i, d in enumerate(members_y) if d & dual_m.aplus[fa])
        rhs_dia = _mask(i for i in range(len(members_y))
                        if members_x[cm[i]] & dual_l.aplus[a])
        rep.check(lhs_dia == rhs_dia, f"hom {lat.n}->{m.n}",
                  "diamond generator square commutes", lat.name_of(a))
    return rep
