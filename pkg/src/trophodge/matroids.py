"""Matroids: rank and closure oracles, the flats lattice, minors, and the
parallel connection.  These feed the Bergman-fan constructions.

The internal canonical representation is the set of bases; all other
constructors (uniform, graphic, linear over Q, independent sets) reduce to it.
Rank queries scan the bases, which is perfectly adequate at desk scale
(|E| <= 16, and in practice much smaller).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, Hashable, Iterable, Sequence

from .rationals import QMatrix

Label = Hashable


class ElementNotInGroundSet(KeyError):
    pass


class NotSimple(ValueError):
    """The matroid has loops or parallel elements where simplicity is required."""


class ImproperBasepoint(ValueError):
    pass


class InvalidMatroid(ValueError):
    """The provided data violates the matroid axioms."""


def _check_exchange(bases: set[frozenset]) -> None:
    sizes = {len(b) for b in bases}
    if len(sizes) != 1:
        raise InvalidMatroid("bases of unequal cardinality")
    for b1 in bases:
        for b2 in bases:
            for x in b1 - b2:
                if not any((b1 - {x}) | {y} in bases for y in b2 - b1):
                    raise InvalidMatroid("basis exchange fails")


class Matroid:
    """A matroid given by its ground set and set of bases."""

    def __init__(self, ground_set: Iterable[Label], bases: Iterable[Iterable[Label]], check: bool = True):
        self.ground_set = tuple(sorted(ground_set, key=repr))
        gs = set(self.ground_set)
        self.bases: FrozenSet[frozenset] = frozenset(frozenset(b) for b in bases)
        if not self.bases:
            raise InvalidMatroid("a matroid has at least one basis")
        for b in self.bases:
            if not b <= gs:
                raise ElementNotInGroundSet(f"basis element outside ground set: {set(b) - gs}")
        if check:
            _check_exchange(set(self.bases))
        self.rank_total = len(next(iter(self.bases)))

    # -- constructors ---------------------------------------------------

    @staticmethod
    def uniform(r: int, n: int) -> "Matroid":
        if not 0 <= r <= n:
            raise InvalidMatroid("need 0 <= r <= n")
        ground = range(n)
        if r == 0:
            return Matroid(ground, [frozenset()], check=False)
        return Matroid(ground, combinations(ground, r), check=False)

    @staticmethod
    def from_independent_sets(ground_set: Iterable[Label], independent: Iterable[Iterable[Label]]) -> "Matroid":
        indep = {frozenset(i) for i in independent}
        if frozenset() not in indep:
            raise InvalidMatroid("the empty set must be independent")
        for i in indep:
            for x in i:
                if i - {x} not in indep:
                    raise InvalidMatroid("independence is not hereditary")
        r = max(len(i) for i in indep)
        return Matroid(ground_set, [i for i in indep if len(i) == r])

    @staticmethod
    def graphic(edges: Sequence[tuple[Label, Label]], labels: Sequence[Label] | None = None) -> "Matroid":
        """Graphic matroid: ground set = edges, bases = maximal spanning forests."""
        if labels is None:
            labels = list(range(len(edges)))
        vertices = sorted({v for e in edges for v in e}, key=repr)
        vi = {v: k for k, v in enumerate(vertices)}

        def forest_rank(subset):
            parent = list(range(len(vertices)))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            r = 0
            for k in subset:
                u, v = edges[k]
                ru, rv = find(vi[u]), find(vi[v])
                if ru != rv:
                    parent[ru] = rv
                    r += 1
            return r

        n = len(edges)
        total = forest_rank(range(n))
        bases = [
            frozenset(labels[k] for k in comb)
            for comb in combinations(range(n), total)
            if forest_rank(comb) == total
        ]
        return Matroid(labels, bases, check=False)

    @staticmethod
    def linear(columns: Sequence[Sequence], labels: Sequence[Label] | None = None) -> "Matroid":
        """Matroid of a rational vector configuration (one column per element)."""
        if labels is None:
            labels = list(range(len(columns)))
        cols = [tuple(Fraction(e) for e in c) for c in columns]
        mat = QMatrix.from_columns(cols)
        total = mat.rank()
        n = len(cols)
        bases = [
            frozenset(labels[k] for k in comb)
            for comb in combinations(range(n), total)
            if QMatrix.from_columns([cols[k] for k in comb]).rank() == total
        ]
        return Matroid(labels, bases, check=False)

    # -- rank / closure oracles ------------------------------------------

    def _as_subset(self, a: Iterable[Label]) -> frozenset:
        s = frozenset(a)
        extra = s - set(self.ground_set)
        if extra:
            raise ElementNotInGroundSet(str(extra))
        return s

    def rank(self, a: Iterable[Label]) -> int:
        s = self._as_subset(a)
        return max(len(b & s) for b in self.bases)

    def closure(self, a: Iterable[Label]) -> frozenset:
        s = self._as_subset(a)
        r = self.rank(s)
        return frozenset(e for e in self.ground_set if e in s or self.rank(s | {e}) == r)

    def is_independent(self, a: Iterable[Label]) -> bool:
        s = self._as_subset(a)
        return self.rank(s) == len(s)

    def is_loop(self, e: Label) -> bool:
        return self.rank({e}) == 0

    def is_coloop(self, e: Label) -> bool:
        self._as_subset({e})
        return all(e in b for b in self.bases)

    def is_simple(self) -> bool:
        if any(self.is_loop(e) for e in self.ground_set):
            return False
        return all(
            self.rank({e, f}) == 2 for e, f in combinations(self.ground_set, 2)
        )

    # -- flats ------------------------------------------------------------

    def flats(self) -> "FlatsLattice":
        if not self.is_simple():
            raise NotSimple("flats lattice is computed for simple loopless matroids")
        return FlatsLattice(self)

    # -- minors and connections --------------------------------------------

    def delete(self, a: Label) -> "Matroid":
        self._as_subset({a})
        if len(self.ground_set) == 1:
            raise InvalidMatroid("cannot delete the last element")
        if self.is_coloop(a):
            bases = {b - {a} for b in self.bases}
        else:
            bases = {b for b in self.bases if a not in b}
        return Matroid([e for e in self.ground_set if e != a], bases, check=False)

    def contract(self, a: Label) -> "Matroid":
        self._as_subset({a})
        if len(self.ground_set) == 1:
            raise InvalidMatroid("cannot contract the last element")
        if self.is_loop(a):
            return self.delete(a)
        bases = {b - {a} for b in self.bases if a in b}
        return Matroid([e for e in self.ground_set if e != a], bases, check=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matroid)
            and self.ground_set == other.ground_set
            and self.bases == other.bases
        )

    def __hash__(self):
        return hash((self.ground_set, self.bases))

    def __repr__(self):
        return f"Matroid(rank {self.rank_total} on {list(self.ground_set)})"

    def is_isomorphic_to_uniform(self, r: int, n: int) -> bool:
        if len(self.ground_set) != n or self.rank_total != r:
            return False
        return len(self.bases) == len(list(combinations(range(n), r)))


class FlatsLattice:
    """All flats of a simple matroid, graded by rank."""

    def __init__(self, m: Matroid):
        self.matroid = m
        by_rank: list[set[frozenset]] = [set() for _ in range(m.rank_total + 1)]
        by_rank[0].add(m.closure(frozenset()))
        for r in range(m.rank_total):
            for flat in by_rank[r]:
                for e in m.ground_set:
                    if e not in flat:
                        new = m.closure(flat | {e})
                        by_rank[m.rank(new)].add(new)
        self.by_rank: tuple[tuple[frozenset, ...], ...] = tuple(
            tuple(sorted(level, key=lambda f: sorted(map(repr, f)))) for level in by_rank
        )
        full = frozenset(m.ground_set)
        self.flats: tuple[frozenset, ...] = tuple(f for level in self.by_rank for f in level)
        self.proper_flats: tuple[frozenset, ...] = tuple(
            f for f in self.flats if f and f != full
        )

    def covers(self, f: frozenset) -> list[frozenset]:
        r = self.matroid.rank(f)
        return [g for g in self.by_rank[r + 1] if f < g] if r + 1 < len(self.by_rank) else []

    def chains_of_proper_flats(self) -> list[tuple[frozenset, ...]]:
        """All flags of proper flats, including the empty flag."""
        proper = list(self.proper_flats)
        out: list[tuple[frozenset, ...]] = [()]
        stack = [(i, (proper[i],)) for i in range(len(proper))]
        out.extend(ch for _, ch in stack)
        while stack:
            i, chain = stack.pop()
            top = chain[-1]
            for j, g in enumerate(proper):
                if top < g:
                    ext = chain + (g,)
                    out.append(ext)
                    stack.append((j, ext))
        return out


def parallel_connection(m1: Matroid, e1: Label, m2: Matroid, e2: Label):
    """Parallel connection (wedge sum) of two pointed matroids.

    Returns (matroid, relabel1, relabel2) where the relabel maps send original
    labels into the glued ground set.  The shared basepoint is labelled
    ("*",); elements of m2 clashing with m1 labels get a "'" suffix.
    """
    if e1 not in m1.ground_set:
        raise ElementNotInGroundSet(str(e1))
    if e2 not in m2.ground_set:
        raise ElementNotInGroundSet(str(e2))
    if m1.is_loop(e1) or m2.is_loop(e2):
        raise ImproperBasepoint("basepoint may not be a loop")

    star = "*"
    relabel1 = {e: (e if e != e1 else star) for e in m1.ground_set}
    used = set(relabel1.values())
    relabel2 = {}
    for e in m2.ground_set:
        if e == e2:
            relabel2[e] = star
            continue
        cand = e
        while cand in used:
            cand = f"{cand}'"
        relabel2[e] = cand
        used.add(cand)

    b1_with = [frozenset(relabel1[x] for x in b) for b in m1.bases if e1 in b]
    b1_without = [frozenset(relabel1[x] for x in b) for b in m1.bases if e1 not in b]
    b2_with = [frozenset(relabel2[x] for x in b) for b in m2.bases if e2 in b]
    b2_without = [frozenset(relabel2[x] for x in b) for b in m2.bases if e2 not in b]

    bases = set()
    for b in b1_with:
        for c in b2_with:
            bases.add(b | c)
    for b in b1_with:
        for c in b2_without:
            bases.add((b | c) - {star})
    for b in b1_without:
        for c in b2_with:
            bases.add((b | c) - {star})
    ground = sorted(used, key=repr)
    return Matroid(ground, bases, check=True), relabel1, relabel2


FANO_LINES = (
    frozenset({0, 1, 2}),
    frozenset({0, 3, 4}),
    frozenset({0, 5, 6}),
    frozenset({1, 3, 5}),
    frozenset({1, 4, 6}),
    frozenset({2, 3, 6}),
    frozenset({2, 4, 5}),
)


def fano_matroid() -> Matroid:
    """The Fano matroid PG(2, 2): rank 3 on 7 points, 7 three-point lines."""
    bases = [
        frozenset(c) for c in combinations(range(7), 3) if frozenset(c) not in FANO_LINES
    ]
    return Matroid(range(7), bases, check=False)
