"""Finite bounded distributive lattices and Birkhoff/Priestley duality.

A DistLattice wraps a Poset with meet/join tables.  Its dual space is the
poset of prime filters (up-sets of join-irreducibles at finite scale) with
the membership sets a+ = {x : a in x}; at this scale the three topologies of
the dual Priestley space are implicit (discrete / upsets / downsets).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import InvalidHomError, LatticeError, ResourceGuardError
from .posets import OrderedFamily, Poset, bit_indices, order_iso_find

BOUNDED = "bounded-lattice"
MEET_UNITAL = "meet-semilattice-unital"
JOIN_ZERO = "join-semilattice-with-0"


class DistLattice:
    """Bounded distributive lattice on elements 0..n-1.

    meet/join are full n x n tables; `sets` optionally records a concrete
    subset realization (e.g. the upset of the base space each element is).
    """

    __slots__ = ("order", "meet", "join", "bot", "top", "names", "sets")

    def __init__(self, order, meet, join, bot, top, names=None, sets=None):
        self.order = order
        self.meet = meet
        self.join = join
        self.bot = bot
        self.top = top
        self.names = tuple(names) if names is not None else None
        self.sets = tuple(sets) if sets is not None else None

    @property
    def n(self) -> int:
        return self.order.n

    @classmethod
    def from_order(cls, order: Poset, names=None, sets=None) -> "DistLattice":
        """Derive tables from the order; raises LatticeError if they don't exist."""
        n = order.n
        if n == 0:
            raise LatticeError("a bounded lattice needs at least one element")
        bot = order.bottom()
        top = order.top()
        if bot is None or top is None:
            raise LatticeError("order has no bottom or no top")
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                lows = order.down[i] & order.down[j]
                m = next((k for k in bit_indices(lows) if not (lows & ~order.down[k])), None)
                if m is None:
                    raise LatticeError(f"elements {i}, {j} have no meet")
                ups = order.up[i] & order.up[j]
                jn = next((k for k in bit_indices(ups) if not (ups & ~order.up[k])), None)
                if jn is None:
                    raise LatticeError(f"elements {i}, {j} have no join")
                meet[i][j] = meet[j][i] = m
                join[i][j] = join[j][i] = jn
        lat = cls(order, tuple(map(tuple, meet)), tuple(map(tuple, join)), bot, top, names, sets)
        bad = lat.distributivity_witness()
        if bad is not None:
            raise LatticeError(f"not distributive at {bad}")
        return lat

    def distributivity_witness(self):
        for a in range(self.n):
            for b in range(self.n):
                mab = self.meet[a][b]
                for c in range(self.n):
                    if self.meet[a][self.join[b][c]] != self.join[mab][self.meet[a][c]]:
                        return (a, b, c)
        return None

    def validate(self) -> list[str]:
        """Re-check every lattice law; returns human-readable violations."""
        out = []
        n = self.n
        for a in range(n):
            if self.meet[a][a] != a or self.join[a][a] != a:
                out.append(f"idempotence fails at {a}")
            if self.meet[a][self.bot] != self.bot or self.join[a][self.top] != self.top:
                out.append(f"bounds fail at {a}")
            for b in range(n):
                if self.meet[a][b] != self.meet[b][a] or self.join[a][b] != self.join[b][a]:
                    out.append(f"commutativity fails at ({a}, {b})")
                if (self.meet[a][b] == a) != self.order.leq(a, b):
                    out.append(f"meet/order disagree at ({a}, {b})")
                if self.meet[a][self.join[a][b]] != a or self.join[a][self.meet[a][b]] != a:
                    out.append(f"absorption fails at ({a}, {b})")
                for c in range(n):
                    if self.meet[self.meet[a][b]][c] != self.meet[a][self.meet[b][c]]:
                        out.append(f"meet associativity fails at ({a}, {b}, {c})")
                    if self.join[self.join[a][b]][c] != self.join[a][self.join[b][c]]:
                        out.append(f"join associativity fails at ({a}, {b}, {c})")
        bad = self.distributivity_witness()
        if bad is not None:
            out.append(f"distributivity fails at {bad}")
        return out

    def leq(self, a: int, b: int) -> bool:
        return self.order.leq(a, b)

    def meet_all(self, elems) -> int:
        out = self.top
        for a in elems:
            out = self.meet[out][a]
        return out

    def join_all(self, elems) -> int:
        out = self.bot
        for a in elems:
            out = self.join[out][a]
        return out

    def name_of(self, a: int) -> str:
        if self.names is not None:
            return self.names[a]
        if self.sets is not None:
            return "{" + ",".join(str(i) for i in bit_indices(self.sets[a])) + "}"
        return str(a)

    def join_irreducibles(self) -> list[int]:
        """Elements with exactly one lower cover (excludes bottom)."""
        out = []
        for a in range(self.n):
            if a == self.bot:
                continue
            below = self.order.down[a] & ~(1 << a)
            count = 0
            for b in bit_indices(below):
                if self.order.up[b] & below == 1 << b:
                    count += 1
                    if count > 1:
                        break
            if count == 1:
                out.append(a)
        return out

    def dual(self) -> "DistLattice":
        """Order-dual: reversed order, meet and join swapped."""
        return DistLattice(self.order.reverse(), self.join, self.meet,
                           self.top, self.bot, self.names, None)

    def __repr__(self):
        return f"DistLattice(n={self.n})"


def downset_lattice(p: Poset) -> DistLattice:
    """All downsets of p ordered by inclusion, with intersection/union."""
    return _family_lattice(p.downsets())


def upset_lattice(x: Poset) -> DistLattice:
    """Clopen-upset lattice of a finite space: all upsets under inclusion."""
    return _family_lattice(x.upsets())


clopen_upsets = upset_lattice


def _family_lattice(sets: list[int]) -> DistLattice:
    index = {s: i for i, s in enumerate(sets)}
    n = len(sets)
    rows = []
    for a in sets:
        row = 0
        for j, b in enumerate(sets):
            if not (a & ~b):
                row |= 1 << j
        rows.append(row)
    order = Poset(rows)
    meet = tuple(tuple(index[a & b] for b in sets) for a in sets)
    join = tuple(tuple(index[a | b] for b in sets) for a in sets)
    return DistLattice(order, meet, join, index[sets[0]], index[sets[-1]], sets=sets)


def powerset_lattice(npoints: int) -> DistLattice:
    """Boolean lattice of all subsets of an npoints carrier."""
    sets = sorted(range(1 << npoints), key=lambda m: (m.bit_count(), m))
    return _family_lattice(sets)


def is_filter(lat: DistLattice, bits: int) -> bool:
    if not bits >> lat.top & 1:
        return False
    for a in bit_indices(bits):
        if lat.order.up[a] & ~bits:
            return False
        for b in bit_indices(bits):
            if not bits >> lat.meet[a][b] & 1:
                return False
    return True

def is_ideal(lat: DistLattice, bits: int) -> bool:
    if not bits >> lat.bot & 1:
        return False
    for a in bit_indices(bits):
        if lat.order.down[a] & ~bits:
            return False
        for b in bit_indices(bits):
            if not bits >> lat.join[a][b] & 1:
                return False
    return True


def is_prime_filter(lat: DistLattice, bits: int) -> bool:
    """Proper filter with a v b in F implying a in F or b in F."""
    full = (1 << lat.n) - 1
    if bits == full or not is_filter(lat, bits):
        return False
    for a in range(lat.n):
        for b in range(lat.n):
            if bits >> lat.join[a][b] & 1 and not (bits >> a & 1 or bits >> b & 1):
                return False
    return True


def filters(lat: DistLattice) -> OrderedFamily:
    """All filters (principal at finite scale), inclusion-ordered.

    Includes the improper filter: it corresponds to the empty closed upset.
    """
    members = sorted({lat.order.up[a] for a in range(lat.n)},
                     key=lambda m: (m.bit_count(), m))
    return OrderedFamily.by_inclusion(members)


def ideals(lat: DistLattice) -> OrderedFamily:
    members = sorted({lat.order.down[a] for a in range(lat.n)},
                     key=lambda m: (m.bit_count(), m))
    return OrderedFamily.by_inclusion(members)


def principal_filter_generator(lat: DistLattice, fbits: int) -> int:
    """The minimum of a filter (= meet of its members)."""
    return lat.meet_all(bit_indices(fbits))


def principal_ideal_generator(lat: DistLattice, ibits: int) -> int:
    return lat.join_all(bit_indices(ibits))


@dataclass(frozen=True)
class DualSpace:
    """Prime-filter space of a lattice with the membership sets a+.

    points[x] is the prime filter at x as a mask over lattice elements;
    aplus[a] = {x : a in points[x]} as a mask over space elements.
    """

    lattice: DistLattice
    space: Poset
    points: tuple[int, ...]
    aplus: tuple[int, ...]

    def aminus(self, a: int) -> int:
        return self.aplus[a] ^ self.space.full

    def point_index(self, filter_bits: int) -> int:
        return self.points.index(filter_bits)


def priestley_dual(lat: DistLattice) -> DualSpace:
    """Prime filters under inclusion; prime filters are the up-sets of
    join-irreducibles, and each is re-checked against the primality predicate."""
    ji = lat.join_irreducibles()
    points = [lat.order.up[j] for j in ji]
    for j, pt in zip(ji, points):
        if not is_prime_filter(lat, pt):
            raise LatticeError(f"up-set of join-irreducible {j} is not a prime filter")
    rows = []
    for a in points:
        row = 0
        for jdx, b in enumerate(points):
            if not (a & ~b):
                row |= 1 << jdx
        rows.append(row)
    space = Poset(rows)
    aplus = []
    for a in range(lat.n):
        mask = 0
        for x, pt in enumerate(points):
            if pt >> a & 1:
                mask |= 1 << x
        aplus.append(mask)
    return DualSpace(lat, space, tuple(points), tuple(aplus))


@dataclass(frozen=True)
class LatticeHom:
    src: DistLattice
    dst: DistLattice
    mapping: tuple[int, ...]
    kind: str = BOUNDED

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    def violations(self) -> list[str]:
        out = []
        f, src, dst = self.mapping, self.src, self.dst
        if self.kind in (BOUNDED, MEET_UNITAL) and f[src.top] != dst.top:
            out.append("top not preserved")
        if self.kind in (BOUNDED, JOIN_ZERO) and f[src.bot] != dst.bot:
            out.append("bottom not preserved")
        for a in range(src.n):
            for b in range(src.n):
                if self.kind in (BOUNDED, MEET_UNITAL):
                    if f[src.meet[a][b]] != dst.meet[f[a]][f[b]]:
                        out.append(f"meet not preserved at ({a}, {b})")
                if self.kind in (BOUNDED, JOIN_ZERO):
                    if f[src.join[a][b]] != dst.join[f[a]][f[b]]:
                        out.append(f"join not preserved at ({a}, {b})")
        return out

    def require_valid(self) -> "LatticeHom":
        bad = self.violations()
        if bad:
            raise InvalidHomError(f"{self.kind} hom invalid: {bad[0]}")
        return self

    def is_bijective(self) -> bool:
        return len(set(self.mapping)) == self.src.n == self.dst.n

    def compose(self, inner: "LatticeHom") -> "LatticeHom":
        """self after inner."""
        return LatticeHom(inner.src, self.dst,
                          tuple(self.mapping[inner.mapping[a]] for a in range(inner.src.n)),
                          self.kind)


def dual_hom(f: LatticeHom, dual_src: DualSpace | None = None,
             dual_dst: DualSpace | None = None) -> tuple[int, ...]:
    """Inverse-image map between dual spaces: point of P(dst) -> point of P(src).

    Returns images as indices into the dual of f.src; preimages of prime
    filters are verified prime.
    """
    f.require_valid()
    if f.kind != BOUNDED:
        raise InvalidHomError("duality acts on bounded lattice homs")
    dsrc = dual_src or priestley_dual(f.src)
    ddst = dual_dst or priestley_dual(f.dst)
    out = []
    for y in ddst.points:
        pre = 0
        for a in range(f.src.n):
            if y >> f.mapping[a] & 1:
                pre |= 1 << a
        if not is_prime_filter(f.src, pre):
            raise LatticeError("preimage of a prime filter is not prime")
        out.append(dsrc.point_index(pre))
    for i in range(len(out)):
        for j in range(len(out)):
            if ddst.space.leq(i, j) and not dsrc.space.leq(out[i], out[j]):
                raise LatticeError("dual map is not monotone")
    return tuple(out)


def unit_iso(lat: DistLattice, dual: DualSpace | None = None,
             cu: DistLattice | None = None) -> LatticeHom:
    """a -> a+ from the lattice onto the clopen upsets of its dual space."""
    dual = dual or priestley_dual(lat)
    cu = cu or upset_lattice(dual.space)
    index = {s: i for i, s in enumerate(cu.sets)}
    mapping = []
    for a in range(lat.n):
        if dual.aplus[a] not in index:
            raise LatticeError(f"a+ of element {a} is not an upset of the dual space")
        mapping.append(index[dual.aplus[a]])
    hom = LatticeHom(lat, cu, tuple(mapping)).require_valid()
    if not hom.is_bijective():
        raise LatticeError("unit map is not bijective")
    return hom


def counit_iso(x: Poset, cu: DistLattice | None = None,
               dual: DualSpace | None = None) -> tuple[int, ...]:
    """x -> {upsets containing x}, an order-isomorphism onto P(CU(x))."""
    cu = cu or upset_lattice(x)
    dual = dual or priestley_dual(cu)
    mapping = []
    for p in range(x.n):
        fbits = 0
        for i, s in enumerate(cu.sets):
            if s >> p & 1:
                fbits |= 1 << i
        mapping.append(dual.point_index(fbits))
    if len(set(mapping)) != x.n or x.n != dual.space.n:
        raise LatticeError("counit map is not bijective")
    for p in range(x.n):
        for q in range(x.n):
            if x.leq(p, q) != dual.space.leq(mapping[p], mapping[q]):
                raise LatticeError(f"counit not an order-iso at ({p}, {q})")
    return tuple(mapping)


def bool_extension(lat: DistLattice, dual: DualSpace | None = None):
    """Free Boolean extension at finite scale: the powerset of the dual space,
    with the embedding a -> a+.  Returns (boolean lattice, embedding hom)."""
    dual = dual or priestley_dual(lat)
    blat = powerset_lattice(dual.space.n)
    index = {s: i for i, s in enumerate(blat.sets)}
    emb = LatticeHom(lat, blat, tuple(index[dual.aplus[a]] for a in range(lat.n)))
    emb.require_valid()
    if len(set(emb.mapping)) != lat.n:
        raise LatticeError("boolean-extension embedding is not injective")
    return blat, emb


def ideal_filter_flip(lat: DistLattice):
    """Set-complement bijection from prime ideals (prime filters of the order
    dual) onto prime filters, verified antitone with a+/a- swapped.

    Returns (mapping, dual of order-dual, dual of lat)."""
    ld = lat.dual()
    dual_d = priestley_dual(ld)
    dual = priestley_dual(lat)
    full = (1 << lat.n) - 1
    mapping = tuple(dual.point_index(y ^ full) for y in dual_d.points)
    if len(set(mapping)) != dual.space.n or dual_d.space.n != dual.space.n:
        raise LatticeError("flip is not bijective")
    for i in range(dual_d.space.n):
        for j in range(dual_d.space.n):
            if dual_d.space.leq(i, j) != dual.space.leq(mapping[j], mapping[i]):
                raise LatticeError(f"flip not antitone at ({i}, {j})")
    for a in range(lat.n):
        image_plus = 0
        for y in bit_indices(dual_d.aplus[a]):
            image_plus |= 1 << mapping[y]
        if image_plus != dual.aminus(a):
            raise LatticeError(f"flip does not swap membership sets at {a}")
    return mapping, dual_d, dual


def enumerate_homs(src: DistLattice, dst: DistLattice, kind: str = BOUNDED,
                   guard: int = 10 ** 7) -> list[LatticeHom]:
    """All homs of the given kind, by backtracking over element images."""
    if dst.n ** src.n > guard:
        raise ResourceGuardError(f"hom enumeration {dst.n}^{src.n} over guard")
    n = src.n
    out = []
    image = [0] * n

    needs_meet = kind in (BOUNDED, MEET_UNITAL)
    needs_join = kind in (BOUNDED, JOIN_ZERO)

    def ok_so_far(i: int) -> bool:
        if needs_meet and src.top == i and image[i] != dst.top:
            return False
        if needs_join and src.bot == i and image[i] != dst.bot:
            return False
        for a in range(i + 1):
            m = src.meet[a][i]
            j = src.join[a][i]
            if needs_meet and m <= i and image[m] != dst.meet[image[a]][image[i]]:
                return False
            if needs_join and j <= i and image[j] != dst.join[image[a]][image[i]]:
                return False
        return True

    def rec(i: int):
        if i == n:
            out.append(LatticeHom(src, dst, tuple(image), kind))
            return
        for cand in range(dst.n):
            image[i] = cand
            if ok_so_far(i):
                rec(i + 1)

    rec(0)
    return [h for h in out if not h.violations()]


def sample_monotone_maps(src: Poset, dst: Poset, count: int, rng: random.Random,
                         max_tries: int = 200) -> list[tuple[int, ...]]:
    """Seeded random monotone maps src -> dst (images chosen along a linear
    extension, restart on dead ends)."""
    order = sorted(range(src.n), key=lambda i: src.down[i].bit_count())
    out = []
    for _ in range(count):
        for _ in range(max_tries):
            image: dict[int, int] = {}
            ok = True
            for i in order:
                cands = dst.full
                for j in bit_indices(src.down[i] & ~(1 << i)):
                    if j in image:
                        cands &= dst.up[image[j]]
                for j in bit_indices(src.up[i] & ~(1 << i)):
                    if j in image:
                        cands &= dst.down[image[j]]
                if not cands:
                    ok = False
                    break
                picks = list(bit_indices(cands))
                image[i] = picks[rng.randrange(len(picks))]
            if ok:
                out.append(tuple(image[i] for i in range(src.n)))
                break
        else:
            raise ResourceGuardError("could not sample a monotone map")
    return out


def enumerate_distributive_lattices(max_size: int):
    """All bounded distributive lattices with at most max_size elements, up to
    isomorphism (as downset lattices would be; filtered from poset enumeration)."""
    from .posets import enumerate_posets
    out = []
    for n in range(1, max_size + 1):
        for p in enumerate_posets(n, max_n=max_size):
            try:
                out.append(DistLattice.from_order(p))
            except LatticeError:
                continue
    return out


def unital_meet_semilattices(max_size: int) -> list[Poset]:
    """Posets with a top element and all binary meets, up to isomorphism."""
    from .posets import enumerate_posets
    out = []
    for n in range(1, max_size + 1):
        for p in enumerate_posets(n, max_n=max_size):
            if p.top() is None:
                continue
            if all(any(not ((p.down[i] & p.down[j]) & ~p.down[k])
                       for k in bit_indices(p.down[i] & p.down[j]))
                   for i, j in itertools.combinations(range(n), 2)):
                out.append(p)
    return out
