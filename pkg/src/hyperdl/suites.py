"""Named verification suites over exhaustive small universes.

Each suite walks every poset up to isomorphism below a size bound (and every
lattice of clopen upsets over it) and returns Reports.  The CLI `check`
command and the acceptance tests run exactly these.
"""

from __future__ import annotations

import random

from . import fell, free_modal, modal
from .hyperspaces import (FAMILY_CONVEX, box_basis_report, em_subbasis_report,
                          filter_correspondence_report, filter_space_transport_report,
                          hyper_family, convex_quotient_iso)
from .lattices import (DistLattice, LatticeHom, counit_iso, bool_extension,
                       downset_lattice, enumerate_distributive_lattices, enumerate_homs,
                       filters, ideal_filter_flip, priestley_dual, sample_monotone_maps,
                       unit_iso, unital_meet_semilattices, upset_lattice)
from .posets import Poset, enumerate_posets, order_iso_find
from .reports import Report

# Iso-class counts of n-element posets for n = 1.. (frozen from the
# brute-force relation-matrix oracle in the test suite).
POSET_COUNTS = (1, 2, 5, 16, 63, 318, 2045)


def universe(max_n: int) -> list[Poset]:
    out = []
    for n in range(1, max_n + 1):
        out.extend(enumerate_posets(n, max_n=max_n))
    return out


def enumerator_report(max_n: int = 5) -> Report:
    rep = Report(f"poset-enumerator-counts(n<={max_n})")
    for n in range(1, max_n + 1):
        got = sum(1 for _ in enumerate_posets(n, max_n=max_n))
        rep.check(got == POSET_COUNTS[n - 1], f"n={n}", "iso-class count",
                  f"got {got}, want {POSET_COUNTS[n - 1]}")
    return rep


def birkhoff_roundtrip_report(max_n: int = 5) -> Report:
    rep = Report(f"birkhoff-round-trips(n<={max_n})")
    for x in universe(max_n):
        cu = upset_lattice(x)
        dual = priestley_dual(cu)
        try:
            unit_iso(cu, dual)
            counit_iso(x, cu, dual)
            rep.check(True, f"X(n={x.n})", "unit and counit isos")
        except Exception as exc:  # pragma: no cover - failures become witnesses
            rep.fail(f"X(n={x.n})", "unit and counit isos", str(exc))
    return rep


def flip_report(max_n: int = 4) -> Report:
    rep = Report(f"prime-ideal-flip(n<={max_n})")
    for x in universe(max_n):
        cu = upset_lattice(x)
        try:
            ideal_filter_flip(cu)
            rep.check(True, f"X(n={x.n})", "complement flip antitone with sets swapped")
        except Exception as exc:  # pragma: no cover
            rep.fail(f"X(n={x.n})", "complement flip antitone with sets swapped", str(exc))
    return rep


def suite_birkhoff(size: int = 5) -> list[Report]:
    out = [enumerator_report(min(size, len(POSET_COUNTS)))]
    out.append(birkhoff_roundtrip_report(size))
    corr = Report(f"filter-correspondences(n<={size})")
    for x in universe(size):
        cu = upset_lattice(x)
        dual = priestley_dual(cu)
        corr.absorb(filter_correspondence_report(cu, dual))
        corr.absorb(filter_space_transport_report(cu, dual))
    out.append(corr)
    out.append(flip_report(min(size, 4)))
    return out


def suite_hyperspace(size: int = 5) -> list[Report]:
    quot = Report(f"quotient-vs-convex(n<={size})")
    for x in universe(size):
        _, _, rep = convex_quotient_iso(x)
        quot.absorb(rep)
    sub = Report(f"em-subbasis(n<={min(size, 4)})")
    for x in universe(min(size, 4)):
        sub.absorb(em_subbasis_report(x))
    basis = Report(f"miss-basis(n<={min(size, 4)})")
    for x in universe(min(size, 4)):
        cu = upset_lattice(x)
        basis.absorb(box_basis_report(cu))
    return [quot, sub, basis]


def box_universal_report(max_m: int = 4, max_d: int = 5) -> Report:
    """Universal property of the downset construction: existence, hom laws,
    generator equation and generator-determined uniqueness, exhaustively."""
    rep = Report(f"box-universal-property(m<={max_m}, d<={max_d})")
    import itertools
    semis = unital_meet_semilattices(max_m)
    codomains = enumerate_distributive_lattices(max_d)
    for m in semis:
        boxm = free_modal.box_lattice(m)
        for d in codomains:
            count = 0
            for cand in itertools.product(range(d.n), repeat=m.n):
                if not free_modal.is_meet_unital_map(m, d, cand):
                    continue
                count += 1
                try:
                    free_modal.box_universal_extend(m, cand, d, boxm)
                    rep.check(True, f"M(n={m.n})->D(n={d.n})",
                              "extension exists, is a hom, agrees on generators, forced")
                except Exception as exc:  # pragma: no cover
                    rep.fail(f"M(n={m.n})->D(n={d.n})", "universal extension", str(exc))
            rep.check(count > 0, f"M(n={m.n})->D(n={d.n})", "some unital meet map exists")
    return rep


def three_route_report_suite(size: int = 4, seed: int = 0) -> Report:
    rep = Report(f"three-route-agreement(n<={size})")
    rng = random.Random(seed)
    for x in universe(size):
        cu = upset_lattice(x)
        rep.absorb(free_modal.three_route_report(cu, rng=rng))
    chain3 = DistLattice.from_order(Poset.chain(3))
    rep.check(len(free_modal.concrete_modal_lattice(chain3)) == 8,
              "3-chain", "concrete closure size", "want 8")
    square = downset_lattice(Poset.antichain(2))
    rep.check(len(free_modal.concrete_modal_lattice(square)) == 16,
              "2x2", "concrete closure size", "want 16")
    return rep


def translation_report_suite(size: int = 4, count_size: int = 5) -> Report:
    """Pairs<->convex isos, spectrum translations with transports, and the
    pair/convex count identity on the larger universe."""
    rep = Report(f"pair-convex-spectrum(n<={size}, counts n<={count_size})")
    for x in universe(size):
        cu = upset_lattice(x)
        dual = priestley_dual(cu)
        wpf = free_modal.weakly_prime_pairs(cu)
        conv = hyper_family(dual.space, FAMILY_CONVEX)
        rep.absorb(free_modal.pair_convex_report(cu, dual, wpf, conv))
        route = free_modal.concrete_modal_lattice(cu, dual)
        _, prep = free_modal.spectrum_to_pairs(cu, route, wpf)
        rep.absorb(prep)
        _, crep = free_modal.spectrum_to_convex(cu, route, dual, conv)
        rep.absorb(crep)
    for x in universe(count_size):
        cu = upset_lattice(x)
        dual = priestley_dual(cu)
        wpf = free_modal.weakly_prime_pairs(cu)
        conv = hyper_family(dual.space, FAMILY_CONVEX)
        rep.check(len(wpf) == len(conv.family), f"X(n={x.n})",
                  "pair count equals convex count",
                  f"{len(wpf)} vs {len(conv.family)}")
    return rep


def naturality_report_suite(lat_size: int = 5, sample_universe: int = 4,
                            samples: int = 500, seed: int = 0) -> Report:
    """Exhaustive naturality over all homs between small abstract lattices,
    then seeded random inverse-image homs between clopen-upset lattices."""
    rep = Report(f"naturality(lattices<={lat_size}, {samples} sampled homs)")
    lats = enumerate_distributive_lattices(lat_size)
    duals = [priestley_dual(l) for l in lats]
    for src, dsrc in zip(lats, duals):
        for dst, ddst in zip(lats, duals):
            for hom in enumerate_homs(src, dst):
                rep.absorb(free_modal.naturality_report(hom, dsrc, ddst))
    rng = random.Random(seed)
    posets = universe(sample_universe)
    cus = [upset_lattice(x) for x in posets]
    cu_duals = [priestley_dual(cu) for cu in cus]
    indexes = [{s: k for k, s in enumerate(cu.sets)} for cu in cus]
    for _ in range(samples):
        i = rng.randrange(len(posets))
        j = rng.randrange(len(posets))
        g = sample_monotone_maps(posets[j], posets[i], 1, rng)[0]
        mapping = []
        for u in cus[i].sets:
            pre = 0
            for y in range(posets[j].n):
                if u >> g[y] & 1:
                    pre |= 1 << y
            mapping.append(indexes[j][pre])
        hom = LatticeHom(cus[i], cus[j], tuple(mapping)).require_valid()
        rep.absorb(free_modal.naturality_report(hom, cu_duals[i], cu_duals[j]))
    return rep


def table_report_suite(size: int = 4) -> Report:
    """Free-construction duals against the concrete hyperspace posets:
    box dual ~ filters (isotone) ~ upsets reversed; diamond dual ~ downsets;
    boolean-extension duals ~ the full powerset both ways."""
    rep = Report(f"hyperspace-realization-table(n<={size})")
    for x in universe(size):
        cu = upset_lattice(x)
        boxl = free_modal.box_lattice(cu.order)
        dial = free_modal.diamond_lattice(cu.order)
        filters_poset = filters(cu).poset()
        upsets_poset = _inclusion_poset(x.upsets())
        downsets_poset = _inclusion_poset(x.downsets())
        pbox = priestley_dual(boxl.lattice).space
        pdia = priestley_dual(dial.lattice).space
        inst = f"X(n={x.n})"
        rep.check(order_iso_find(pbox, filters_poset) is not None, inst,
                  "box dual isomorphic to the filter poset")
        rep.check(order_iso_find(pbox, upsets_poset.reverse()) is not None, inst,
                  "box dual anti-isomorphic to the closed-upset poset")
        rep.check(order_iso_find(upsets_poset, filters_poset.reverse()) is not None, inst,
                  "closed upsets anti-isomorphic to filters")
        rep.check(order_iso_find(pdia, downsets_poset) is not None, inst,
                  "diamond dual isomorphic to the closed-downset poset")
        rep.absorb(_box_dual_transport_report(cu, boxl))
        blat, _ = bool_extension(cu)
        pbdia = priestley_dual(free_modal.diamond_lattice(blat.order).lattice).space
        pbbox = priestley_dual(free_modal.box_lattice(blat.order).lattice).space
        powerset_poset = _inclusion_poset(sorted(range(1 << x.n),
                                                 key=lambda m: (m.bit_count(), m)))
        rep.check(order_iso_find(pbdia, powerset_poset) is not None, inst,
                  "boolean diamond dual isomorphic to the powerset poset")
        rep.check(order_iso_find(pbbox, powerset_poset.reverse()) is not None, inst,
                  "boolean box dual anti-isomorphic to the powerset poset")
    return rep


def _inclusion_poset(sets: list[int]) -> Poset:
    rows = []
    for a in sets:
        row = 0
        for j, b in enumerate(sets):
            if not (a & ~b):
                row |= 1 << j
        rows.append(row)
    return Poset(rows)


def _box_dual_transport_report(lat: DistLattice, boxl: free_modal.GeneratedLattice) -> Report:
    """Points of the box dual correspond to filters of the base lattice, with
    membership of box_a matching membership of a in the filter."""
    rep = Report("box-dual-filter-transport")
    dual = priestley_dual(boxl.lattice)
    fam = filters(lat)
    findex = {f: i for i, f in enumerate(fam.members)}
    inst = f"L(n={lat.n})"
    images = []
    for pt in dual.points:
        f = 0
        for a in range(lat.n):
            if pt >> boxl.gen[a] & 1:
                f |= 1 << a
        if f not in findex:
            rep.fail(inst, "point restricts to a filter", bin(f))
            images.append(-1)
            continue
        images.append(findex[f])
    rep.check(sorted(images) == list(range(len(fam.members))), inst,
              "points biject with filters")
    if rep.passed:
        for p in range(dual.space.n):
            for q in range(dual.space.n):
                rep.check(dual.space.leq(p, q)
                          == bool(fam.leq[images[p]] >> images[q] & 1),
                          inst, "point order matches filter inclusion", f"({p}, {q})")
        for a in range(lat.n):
            got = 0
            for p in range(dual.space.n):
                if dual.aplus[boxl.gen[a]] >> p & 1:
                    got |= 1 << images[p]
            want = 0
            for i, f in enumerate(fam.members):
                if f >> a & 1:
                    want |= 1 << i
            rep.check(got == want, inst, "box_a membership transports to a-in-F",
                      lat.name_of(a))
    return rep


def suite_free(size: int = 4, seed: int = 0) -> list[Report]:
    return [
        box_universal_report(min(size, 4), 5),
        three_route_report_suite(min(size, 4), seed),
        translation_report_suite(min(size, 4), size),
        naturality_report_suite(5, min(size, 4), 500, seed),
        table_report_suite(min(size, 4)),
        _diamond_dual_box_suite(min(size, 4)),
    ]


def _diamond_dual_box_suite(size: int) -> Report:
    rep = Report(f"diamond-vs-dual-box(n<={size})")
    for m in unital_meet_semilattices(size):
        rep.absorb(free_modal.diamond_matches_dual_box_report(m.reverse()))
    return rep


def modal_roundtrip_report(points: int = 3, lat_size: int = 5) -> Report:
    rep = Report(f"modal-round-trips(points<={points}, lattices<={lat_size})")
    lats = enumerate_distributive_lattices(lat_size)
    routes = [free_modal.concrete_modal_lattice(lat) for lat in lats]
    for kind in (modal.FULL, modal.BOX_ONLY, modal.DIAMOND_ONLY):
        for x in universe(points):
            for s in modal.enumerate_modal_spaces(x, kind):
                rep.absorb(modal.round_trip_space(s))
                if kind == modal.FULL:
                    _, crep = modal.coalg_translation(s)
                    rep.absorb(crep)
        for lat, route in zip(lats, routes):
            for alg in modal.enumerate_modal_algebras(lat, kind):
                rep.absorb(modal.round_trip_algebra(alg))
                _, arep = modal.alg_translation(alg, route)
                rep.absorb(arep)
    return rep


def p_morphism_equivalence_report(points: int = 2) -> Report:
    """For every pair of valid full modal spaces on tiny posets and every map
    between them: the hull condition holds iff forth and back do."""
    import itertools
    rep = Report(f"p-morphism-clauses(points<={points})")
    spaces = []
    for x in universe(points):
        spaces.extend(modal.enumerate_modal_spaces(x, modal.FULL))
    for s1 in spaces:
        for s2 in spaces:
            for f in itertools.product(range(s2.space.n), repeat=s1.space.n):
                sub = modal.p_morphism_report(f, s1, s2)
                for fail in sub.failures:
                    if fail.law == "hull condition equivalent to forth+back":
                        rep.fail(f"spaces({s1.space.n},{s2.space.n})", fail.law, fail.witness)
                rep.tick()
    return rep


def goldblatt_report(points: int = 3, table_size: int = 4) -> Report:
    """Box-only and diamond-only round trips plus the object actions of the
    upper/lower hyperspace functors against the free-construction duals."""
    rep = Report(f"goldblatt(points<={points})")
    for kind in (modal.BOX_ONLY, modal.DIAMOND_ONLY):
        for x in universe(points):
            for s in modal.enumerate_modal_spaces(x, kind):
                rep.absorb(modal.round_trip_space(s))
    for x in universe(table_size):
        cu = upset_lattice(x)
        upsets_poset = _inclusion_poset(x.upsets())
        downsets_poset = _inclusion_poset(x.downsets())
        pbox = priestley_dual(free_modal.box_lattice(cu.order).lattice).space
        pdia = priestley_dual(free_modal.diamond_lattice(cu.order).lattice).space
        inst = f"X(n={x.n})"
        rep.check(order_iso_find(upsets_poset.reverse(), pbox) is not None, inst,
                  "upper hyperspace matches the box dual antitonely")
        rep.check(order_iso_find(downsets_poset, pdia) is not None, inst,
                  "lower hyperspace matches the diamond dual isotonely")
    return rep


def suite_modal(size: int = 3, seed: int = 0) -> list[Report]:
    return [
        modal_roundtrip_report(min(size, 3), 5),
        p_morphism_equivalence_report(2),
        goldblatt_report(min(size, 3), 4),
    ]


def suite_counterexample(bound: int = 6) -> list[Report]:
    return [
        fell.nonconvex_limit_report(bound),
        fell.descriptor_algebra_report(3, 20),
    ]


def suite_all(size: int = 4, seed: int = 0) -> list[Report]:
    out = []
    out.extend(suite_birkhoff(size))
    out.extend(suite_hyperspace(size))
    out.extend(suite_free(size, seed))
    out.extend(suite_modal(min(size, 3), seed))
    out.extend(suite_counterexample(6))
    return out


SUITES = {
    "birkhoff": suite_birkhoff,
    "hyperspace": suite_hyperspace,
    "free": suite_free,
    "modal": suite_modal,
    "all": suite_all,
}


def run_suite(name: str, size: int, seed: int = 0) -> list[Report]:
    fn = SUITES[name]
    if name in ("free", "modal", "all"):
        return fn(size, seed)
    return fn(size)
