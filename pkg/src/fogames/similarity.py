"""Similarity classes (vertices whose transposition is an automorphism),
the exceptional classes S, S1, S2 and exact defining ranks for them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, bits, complement, to_mask


@dataclass(frozen=True)
class SimilarityPartition:
    classes: tuple[frozenset[int], ...]
    class_of: tuple[int, ...]  # vertex -> index into classes

    def sigma_of(self, v: int) -> int:
        return len(self.classes[self.class_of[v]])

    @property
    def sigma(self) -> int:
        return max(len(c) for c in self.classes)

    def largest_classes(self) -> list[frozenset[int]]:
        s = self.sigma
        return [c for c in self.classes if len(c) == s]


class Membership(str, enum.Enum):
    NONE = "NONE"
    S = "S"
    S1 = "S1"
    S2 = "S2"


@dataclass(frozen=True)
class ClassReport:
    membership: Membership
    sigma: int
    order: int
    largest_class: frozenset[int]
    maximal_homogeneous: bool
    in_s: bool
    candidates: tuple[tuple[frozenset[int], bool], ...]

    def to_json(self) -> dict:
        return {
            "membership": self.membership.value,
            "sigma": self.sigma,
            "order": self.order,
            "in_S": self.in_s,
            "largest_class": sorted(self.largest_class),
            "maximal_homogeneous": self.maximal_homogeneous,
            "candidates": [{"class": sorted(c), "maximal_homogeneous": m}
                           for c, m in self.candidates],
        }


def transposition_is_automorphism(g: Graph, u: int, v: int) -> bool:
    """Brute-force check that swapping ``u`` and ``v`` preserves every edge."""
    if u == v:
        return True
    swap = list(range(g.n))
    swap[u], swap[v] = v, u
    return all(g.has_edge(a, b) == g.has_edge(swap[a], swap[b])
               for a in range(g.n) for b in range(a + 1, g.n))


def similarity_partition(g: Graph) -> SimilarityPartition:
    """Group vertices with equal open rows (non-adjacent twins) and equal rows of
    the complement (adjacent twins) by sorting, then merge the two groupings."""
    comp = complement(g)
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rows in (g.rows, comp.rows):
        order = sorted(range(g.n), key=lambda v: (rows[v], v))
        for a, b in zip(order, order[1:]):
            if rows[a] == rows[b]:
                parent[find(b)] = find(a)

    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    classes = tuple(sorted((frozenset(c) for c in groups.values()), key=min))
    class_of = [0] * g.n
    for i, c in enumerate(classes):
        for v in c:
            class_of[v] = i
    return SimilarityPartition(classes, tuple(class_of))


def sigma(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("similarity index of the empty graph is undefined")
    return similarity_partition(g).sigma


def sigma_of(g: Graph, v: int) -> int:
    if g.n == 0:
        raise ValueError("similarity index of the empty graph is undefined")
    return similarity_partition(g).sigma_of(v)


def is_clique(g: Graph, vertices) -> bool:
    vs = sorted(vertices)
    return all(g.has_edge(a, b) for i, a in enumerate(vs) for b in vs[i + 1:])


def is_independent(g: Graph, vertices) -> bool:
    vs = sorted(vertices)
    return not any(g.has_edge(a, b) for i, a in enumerate(vs) for b in vs[i + 1:])


def is_maximal_homogeneous(g: Graph, cls: frozenset[int]) -> bool:
    """True when the clique (independent set) ``cls`` cannot be extended by one
    outside vertex. A singleton counts as both and must fail both extensions."""
    mask = to_mask(cls)
    outside = [w for w in range(g.n) if w not in cls]
    clique, indep = is_clique(g, cls), is_independent(g, cls)
    if not (clique or indep):
        raise ValueError("class is not homogeneous")
    if clique and any(g.rows[w] & mask == mask for w in outside):
        return False
    if indep and any(g.rows[w] & mask == 0 for w in outside):
        return False
    return True


def classify(g: Graph) -> ClassReport:
    if g.n == 0:
        raise ValueError("classification needs at least one vertex")
    part = similarity_partition(g)
    s, n = part.sigma, g.n
    in_s = Fraction(s) > Fraction(n + 3, 2)
    in_s2_range = Fraction(s) > Fraction(n + 1, 2)
    candidates = tuple((c, is_maximal_homogeneous(g, c)) for c in part.largest_classes())
    membership = Membership.NONE
    chosen = candidates[0]
    if in_s and any(m for _, m in candidates):
        membership = Membership.S1
        chosen = next(c for c in candidates if c[1])
    elif in_s2_range and any(not m for _, m in candidates):
        membership = Membership.S2
        chosen = next(c for c in candidates if not c[1])
    return ClassReport(membership, s, n, chosen[0], chosen[1], in_s, candidates)


def oplus(g: Graph, v: int, l: int) -> Graph:
    """Append ``l`` new vertices, each similar to ``v``."""
    if l < 0:
        raise ValueError("l must be non-negative")
    if l == 0:
        return g
    part = similarity_partition(g)
    cls = part.classes[part.class_of[v]]
    if len(cls) < 2:
        raise ValueError(f"vertex {v} has similarity index 1; extension is ambiguous")
    clique = is_clique(g, cls)
    cls_mask = to_mask(cls)
    outside_nbrs = g.rows[v] & ~cls_mask
    n = g.n
    rows = list(g.rows) + [0] * l
    new = range(n, n + l)
    for w in new:
        nbrs = outside_nbrs
        if clique:
            nbrs |= cls_mask | to_mask(x for x in new if x != w)
        rows[w] = nbrs
        for u in bits(nbrs):
            if u < n:
                rows[u] |= 1 << w
    return Graph(n + l, tuple(rows))


# ------------------------------------------------------ defining ranks

@dataclass(frozen=True)
class DefiningRank:
    exact: int | None
    lower: int
    upper: int
    membership: Membership
    lower_source: str

    def to_json(self) -> dict:
        out = {"membership": self.membership.value}
        if self.exact is not None:
            out["D"] = self.exact
        else:
            out["D_interval"] = [self.lower, self.upper]
            out["lower_source"] = self.lower_source
        return out


def defining_rank_report(g: Graph, exhaustive_limit: int = 6) -> DefiningRank:
    """Exact defining rank for S1/S2 graphs, otherwise an interval whose upper
    end is floor((n+5)/2) and whose lower end is the identification rank when
    the order allows exhaustive search."""
    report = classify(g)
    if report.membership is Membership.S1:
        d = report.sigma + 1
        return DefiningRank(d, d, d, report.membership, "exact")
    if report.membership is Membership.S2:
        d = report.sigma + 2
        return DefiningRank(d, d, d, report.membership, "exact")
    upper = (g.n + 5) // 2
    if g.n <= exhaustive_limit:
        from .solver import identification_rank

        lower, source = max(identification_rank(g), 1), "identification_rank"
    else:
        lower, source = 1, "trivial"
    return DefiningRank(None, lower, upper, report.membership, source)


@dataclass(frozen=True)
class SpecialPairRank:
    pebbles: int
    rank: int
    rank_kind: str  # "D0" when the zero-alternation rank is known, else "D"
    maximal_homogeneous: bool

    def to_json(self) -> dict:
        return {"V": self.pebbles, self.rank_kind: self.rank,
                "maximal_homogeneous": self.maximal_homogeneous}


def exact_pair_rank_special(g: Graph, v: int, l: int) -> SpecialPairRank:
    """Closed-form ranks for the pair (g, oplus(g, v, l)) when the class of
    ``v`` is a largest similarity class covering at least half of ``g``."""
    part = similarity_partition(g)
    s = part.sigma
    if l < 1 or 2 * s < g.n or part.sigma_of(v) != s:
        raise ValueError("needs l >= 1, sigma(g) >= n/2 and sigma_of(g, v) = sigma(g)")
    if s < 2:
        raise ValueError("extension needs a similarity class of size >= 2")
    maximal = is_maximal_homogeneous(g, part.classes[part.class_of[v]])
    if maximal:
        return SpecialPairRank(s + 1, s + 1, "D0", True)
    return SpecialPairRank(s + 1, s + 2, "D", False)
