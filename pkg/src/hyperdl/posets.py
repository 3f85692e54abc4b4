"""Finite posets over bitmask-encoded carriers.

Elements of a poset are the integers 0..n-1 and subsets are n-bit integer
masks, so closures, convex hulls and the Egli-Milner quasi-order are each a
handful of bitwise operations.  A finite poset doubles as a Priestley space
whose topology is discrete: "clopen upset" means "upset" throughout.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .errors import CarrierMismatchError, ResourceGuardError, WrongOrderError

DEFAULT_MAX_ENUM = 6

INCLUSION = "inclusion"
REVERSE_INCLUSION = "reverse-inclusion"
EGLI_MILNER = "egli-milner"
CUSTOM = "custom"


def max_enum_size() -> int:
    """Enumeration resource guard; HYPERDL_MAX_SIZE overrides the default."""
    raw = os.environ.get("HYPERDL_MAX_SIZE")
    if raw is not None:
        return int(raw)
    return DEFAULT_MAX_ENUM


def bit_indices(mask: int):
    """Yield the set bit positions of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


class Poset:
    """Immutable finite poset given by its full order relation.

    up[i] is the mask of {j : i <= j} (including i); down[i] the mask of
    {j : j <= i}.  The constructor validates reflexivity, antisymmetry and
    transitivity.
    """

    __slots__ = ("n", "up", "down")

    def __init__(self, up):
        up = tuple(up)
        n = len(up)
        full = (1 << n) - 1
        down = [0] * n
        for i, row in enumerate(up):
            if row & ~full:
                raise CarrierMismatchError(f"row {i} exceeds carrier of size {n}")
            if not row >> i & 1:
                raise ValueError(f"order not reflexive at {i}")
            for j in bit_indices(row):
                down[j] |= 1 << i
        for i in range(n):
            if up[i] & down[i] != 1 << i:
                raise ValueError(f"order not antisymmetric at {i}")
            for j in bit_indices(up[i]):
                if up[j] & ~up[i]:
                    raise ValueError(f"order not transitive at ({i}, {j})")
        self.n = n
        self.up = up
        self.down = tuple(down)

    @classmethod
    def from_pairs(cls, n: int, pairs, close: bool = True) -> "Poset":
        """Build from (i, j) meaning i <= j; covering pairs are closed off."""
        up = [1 << i for i in range(n)]
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise CarrierMismatchError(f"pair ({i}, {j}) outside carrier")
            up[i] |= 1 << j
        if close:
            changed = True
            while changed:
                changed = False
                for i in range(n):
                    row = up[i]
                    for j in bit_indices(row):
                        row |= up[j]
                    if row != up[i]:
                        up[i] = row
                        changed = True
        return cls(up)

    @classmethod
    def chain(cls, n: int) -> "Poset":
        full = (1 << n) - 1
        return cls(tuple(full & ~((1 << i) - 1) for i in range(n)))

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(tuple(1 << i for i in range(n)))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def check_subset(self, s: int) -> int:
        if s & ~self.full:
            raise CarrierMismatchError(f"subset {bin(s)} exceeds carrier of size {self.n}")
        return s

    def up_closure(self, s: int) -> int:
        self.check_subset(s)
        out = 0
        for i in bit_indices(s):
            out |= self.up[i]
        return out

    def down_closure(self, s: int) -> int:
        self.check_subset(s)
        out = 0
        for i in bit_indices(s):
            out |= self.down[i]
        return out

    def convex_hull(self, s: int) -> int:
        return self.up_closure(s) & self.down_closure(s)

    def is_upset(self, s: int) -> bool:
        return self.up_closure(s) == s

    def is_downset(self, s: int) -> bool:
        return self.down_closure(s) == s

    def is_convex(self, s: int) -> bool:
        return self.convex_hull(s) == s

    def em_leq(self, a: int, b: int) -> bool:
        """Egli-Milner quasi-order: a <= b iff a within down(b) and b within up(a)."""
        self.check_subset(a)
        self.check_subset(b)
        return not (a & ~self.down_closure(b)) and not (b & ~self.up_closure(a))

    def upsets(self) -> list[int]:
        """All upsets: unions of principal upsets, sorted by (size, mask)."""
        seen = {0}
        for i in range(self.n):
            seen |= {u | self.up[i] for u in seen}
        return sorted(seen, key=lambda m: (m.bit_count(), m))

    def downsets(self) -> list[int]:
        seen = {0}
        for i in range(self.n):
            seen |= {u | self.down[i] for u in seen}
        return sorted(seen, key=lambda m: (m.bit_count(), m))

    def convex_sets(self, max_n: int = 14) -> list[int]:
        if self.n > max_n:
            raise ResourceGuardError(f"convex-set enumeration over 2^{self.n} subsets")
        return [s for s in range(1 << self.n) if self.is_convex(s)]

    def maximal_elements(self, s: int | None = None) -> int:
        s = self.full if s is None else self.check_subset(s)
        return mask_of(i for i in bit_indices(s) if not (self.up[i] & s & ~(1 << i)))

    def minimal_elements(self, s: int | None = None) -> int:
        s = self.full if s is None else self.check_subset(s)
        return mask_of(i for i in bit_indices(s) if not (self.down[i] & s & ~(1 << i)))

    def top(self) -> int | None:
        for i in range(self.n):
            if self.up[i] == 1 << i and self.down[i] == self.full:
                return i
        return None

    def bottom(self) -> int | None:
        for i in range(self.n):
            if self.up[i] == self.full:
                return i
        return None

    def covers(self) -> list[tuple[int, int]]:
        """Transitive reduction as (lower, upper) pairs, lexicographic."""
        out = []
        for i in range(self.n):
            above = self.up[i] & ~(1 << i)
            for j in bit_indices(above):
                if above & self.down[j] == 1 << j:
                    out.append((i, j))
        return out

    def reverse(self) -> "Poset":
        return Poset(self.down)

    def relabel(self, perm) -> "Poset":
        """Image under perm: element i becomes perm[i]."""
        up = [0] * self.n
        for i in range(self.n):
            row = 0
            for j in bit_indices(self.up[i]):
                row |= 1 << perm[j]
            up[perm[i]] = row
        return Poset(up)

    def encode(self) -> int:
        """Row-major bit encoding of the relation matrix."""
        code = 0
        for i in range(self.n):
            code |= self.up[i] << (i * self.n)
        return code

    def _refinement_keys(self, rounds: int = 3) -> list:
        keys = [(self.down[i].bit_count(), self.up[i].bit_count()) for i in range(self.n)]
        for _ in range(rounds):
            nxt = []
            for i in range(self.n):
                below = tuple(sorted(keys[j] for j in bit_indices(self.down[i] & ~(1 << i))))
                above = tuple(sorted(keys[j] for j in bit_indices(self.up[i] & ~(1 << i))))
                nxt.append((keys[i], below, above))
            if len(set(nxt)) == len(set(keys)):
                keys = nxt
                break
            keys = nxt
        return keys

    def canonical_key(self) -> tuple[int, int]:
        """(n, minimal encoding) — equal exactly for isomorphic posets.

        The minimum is taken over permutations that list the iterated
        degree-refinement classes in sorted class order; permutations mixing
        classes cannot produce the minimizing matrix of either poset, so the
        restriction is exact.
        """
        keys = self._refinement_keys()
        classes: dict = {}
        for i, k in enumerate(keys):
            classes.setdefault(k, []).append(i)
        blocks = [classes[k] for k in sorted(classes)]
        best = None
        for parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
            order = [i for part in parts for i in part]
            perm = [0] * self.n
            for pos, i in enumerate(order):
                perm[i] = pos
            code = 0
            for i in range(self.n):
                base = perm[i] * self.n
                for j in bit_indices(self.up[i]):
                    code |= 1 << (base + perm[j])
            if best is None or code < best:
                best = code
        return (self.n, best if best is not None else 0)

    def canonical(self) -> "Poset":
        n, code = self.canonical_key()
        return Poset(tuple((code >> (i * n)) & ((1 << n) - 1) for i in range(n)))

    def __eq__(self, other):
        return isinstance(other, Poset) and self.up == other.up

    def __hash__(self):
        return hash(self.up)

    def __repr__(self):
        return f"Poset({self.n}, covers={self.covers()})"


@dataclass(frozen=True)
class OrderedFamily:
    """A family of carrier subsets with a quasi-order between its members.

    leq[i] is the mask of member indices j with member i <= member j.  For
    every label except egli-milner the order must be a partial order.
    """

    members: tuple[int, ...]
    leq: tuple[int, ...]
    label: str

    def __post_init__(self):
        m = len(self.members)
        for i in range(m):
            if not self.leq[i] >> i & 1:
                raise WrongOrderError(f"family order not reflexive at member {i}")
            for j in bit_indices(self.leq[i]):
                if self.leq[j] & ~self.leq[i]:
                    raise WrongOrderError(f"family order not transitive at ({i}, {j})")
        if self.label != EGLI_MILNER:
            for i in range(m):
                for j in bit_indices(self.leq[i]):
                    if j != i and self.leq[j] >> i & 1:
                        raise WrongOrderError(f"family order not antisymmetric at ({i}, {j})")

    def __len__(self):
        return len(self.members)

    def member_index(self) -> dict[int, int]:
        return {s: i for i, s in enumerate(self.members)}

    def leq_members(self, i: int, j: int) -> bool:
        return bool(self.leq[i] >> j & 1)

    def poset(self) -> Poset:
        """The member order as a Poset (requires antisymmetry)."""
        return Poset(self.leq)

    @classmethod
    def by_inclusion(cls, members, reverse: bool = False) -> "OrderedFamily":
        members = tuple(members)
        rows = []
        for a in members:
            row = 0
            for j, b in enumerate(members):
                small, big = (b, a) if reverse else (a, b)
                if not (small & ~big):
                    row |= 1 << j
            rows.append(row)
        return cls(members, tuple(rows), REVERSE_INCLUSION if reverse else INCLUSION)

    @classmethod
    def egli_milner(cls, base: Poset, members) -> "OrderedFamily":
        members = tuple(members)
        ups = [base.up_closure(s) for s in members]
        downs = [base.down_closure(s) for s in members]
        rows = []
        for i, a in enumerate(members):
            row = 0
            for j, b in enumerate(members):
                if not (a & ~downs[j]) and not (b & ~ups[i]):
                    row |= 1 << j
            rows.append(row)
        return cls(members, tuple(rows), EGLI_MILNER)


@dataclass(frozen=True)
class FamilyQuotient:
    """Partition of an OrderedFamily by mutual comparability, with the induced order."""

    classes: tuple[tuple[int, ...], ...]
    proj: tuple[int, ...]
    order: Poset


def em_quotient(base: Poset, fam: OrderedFamily) -> FamilyQuotient:
    """Quotient an Egli-Milner family by A ~ B iff A <= B and B <= A."""
    if fam.label != EGLI_MILNER:
        raise WrongOrderError(f"em_quotient needs an egli-milner family, got {fam.label!r}")
    m = len(fam.members)
    proj = [-1] * m
    classes: list[list[int]] = []
    for i in range(m):
        if proj[i] >= 0:
            continue
        cls = [j for j in bit_indices(fam.leq[i]) if fam.leq[j] >> i & 1]
        for j in cls:
            proj[j] = len(classes)
        classes.append(cls)
    k = len(classes)
    rows = [0] * k
    for ci, cls in enumerate(classes):
        rep = cls[0]
        for cj in range(k):
            if fam.leq[rep] >> classes[cj][0] & 1:
                rows[ci] |= 1 << cj
    return FamilyQuotient(tuple(tuple(c) for c in classes), tuple(proj), Poset(rows))


def order_iso_find(p: Poset, q: Poset):
    """First order-isomorphism p -> q in lexicographic order, or None.

    Candidates are pruned by iterated degree-refinement keys (an isomorphism
    must preserve them), which cannot skip the lexicographically first
    isomorphism.
    """
    if p.n != q.n:
        return None
    pk = p._refinement_keys()
    qk = q._refinement_keys()
    if sorted(pk) != sorted(qk):
        return None
    n = p.n
    image = [-1] * n
    used = 0

    def extend(i: int):
        nonlocal used
        if i == n:
            return True
        for cand in range(n):
            if used >> cand & 1 or pk[i] != qk[cand]:
                continue
            ok = True
            for j in range(i):
                if p.leq(i, j) != q.leq(cand, image[j]) or p.leq(j, i) != q.leq(image[j], cand):
                    ok = False
                    break
            if ok:
                image[i] = cand
                used |= 1 << cand
                if extend(i + 1):
                    return True
                used &= ~(1 << cand)
                image[i] = -1
        return False

    return tuple(image) if extend(0) else None


def _extend_with_max(p: Poset, downset: int) -> Poset:
    up = list(p.up)
    new = 1 << p.n
    for i in bit_indices(downset):
        up[i] |= new
    up.append(new)
    return Poset(up)


def enumerate_posets(n: int, max_n: int | None = None):
    """One canonical representative per isomorphism class of n-element posets.

    Built by repeatedly adding a maximal element above each downset of each
    smaller poset (every poset arises by deleting a maximal element), then
    deduplicating on the canonical matrix.
    """
    bound = max_enum_size() if max_n is None else max_n
    if n > bound:
        raise ResourceGuardError(f"poset enumeration for n={n} over bound {bound}")
    if n < 1:
        return
    level = [Poset((1,))]
    for _ in range(n - 1):
        seen: dict[tuple[int, int], Poset] = {}
        for p in level:
            for d in p.downsets():
                q = _extend_with_max(p, d)
                key = q.canonical_key()
                if key not in seen:
                    seen[key] = q.canonical()
        level = [seen[k] for k in sorted(seen)]
    yield from level
