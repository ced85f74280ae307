"""CFI-style hard pairs built from regular seed graphs, and brute-force
separator and expansion numbers for small seeds.

Gadget: each seed vertex v of degree d becomes the 2^(d-1) "middle" vertices
m(v, S), one per even subset S of the edges at v. Each seed edge e becomes two
vertices e0 and e1 shared by both endpoints; m(v, S) is joined to e1 when e is
in S and to e0 otherwise. The twisted copy swaps e0 and e1 for the
lexicographically least edge, on the side of its lower endpoint only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graph import Graph, bits, connected_components, is_connected, is_isomorphic, is_regular
from .wl import distinguishing_dimension

MAX_BRUTE_FORCE_ORDER = 16


class InvalidSeedError(ValueError):
    pass


@dataclass(frozen=True)
class CfiInstance:
    seed: Graph
    pair: tuple[Graph, Graph]
    twist: tuple[int, int]
    provenance: tuple[str, ...]
    certified_by: str

    @property
    def degree(self) -> int:
        return is_regular(self.seed)


def _even_subsets(k: int) -> list[int]:
    return [m for m in range(1 << k) if bin(m).count("1") % 2 == 0]


def _build(seed: Graph, twist: tuple[int, int] | None):
    edges = seed.edges()
    edge_index = {e: i for i, e in enumerate(edges)}
    incident = {v: [e for e in edges if v in e] for v in range(seed.n)}
    labels: list[str] = []
    middles = []
    for v in range(seed.n):
        inc = incident[v]
        for mask in _even_subsets(len(inc)):
            subset = [inc[i] for i in range(len(inc)) if (mask >> i) & 1]
            middles.append((v, frozenset(subset)))
            inner = ",".join(f"{a}-{b}" for a, b in subset)
            labels.append(f"middle({v},{{{inner}}})")
    base = len(middles)
    for a, b in edges:
        for bit in (0, 1):
            labels.append(f"edgepair({a}-{b},{bit})")
    n = len(labels)
    adj = [[] for _ in range(n)]
    for idx, (v, subset) in enumerate(middles):
        for e in incident[v]:
            bit = 1 if e in subset else 0
            if twist is not None and e == twist and v == twist[0]:
                bit ^= 1
            adj[idx].append(base + 2 * edge_index[e] + bit)
    return Graph.from_edges(n, [(u, w) for u in range(n) for w in adj[u]]), tuple(labels)


def cfi_pair(seed: Graph, certify_max_k: int = 3) -> CfiInstance:
    d = is_regular(seed)
    if d is None:
        raise InvalidSeedError("seed graph is not regular")
    if not is_connected(seed):
        raise InvalidSeedError("seed graph is not connected")
    if d < 2:
        raise InvalidSeedError("seed degree must be at least 2")
    twist = seed.edges()[0]
    g, labels = _build(seed, None)
    g2, _ = _build(seed, twist)

    order = (d + 2 ** (d - 1)) * seed.n
    if g.n != order or g2.n != order:
        raise AssertionError(f"gadget order {g.n} differs from {order}")
    if g.max_degree() != 2 ** (d - 1) or g2.max_degree() != 2 ** (d - 1):
        raise AssertionError("gadget maximum degree differs from 2^(d-1)")
    if d >= 3 and not (is_connected(g) and is_connected(g2)):
        raise AssertionError("gadget graphs are disconnected")
    if g.n <= 10:
        if is_isomorphic(g, g2):
            raise AssertionError("gadget pair is isomorphic")
        how = "isomorphism search"
    else:
        k = distinguishing_dimension(g, g2, "multiset", certify_max_k)
        if k is None:
            raise AssertionError(f"multiset WL up to dimension {certify_max_k} "
                                 "did not separate the gadget pair")
        how = f"multiset WL dimension {k}"
    return CfiInstance(seed, (g, g2), twist, labels, how)


# ------------------------------------------------------------ expansion

def _check_order(h: Graph) -> None:
    if h.n > MAX_BRUTE_FORCE_ORDER:
        raise ValueError(f"brute force is limited to order {MAX_BRUTE_FORCE_ORDER}")


def _components_small(h: Graph, removed: int) -> bool:
    keep = h.vertex_mask & ~removed
    seen = 0
    for start in bits(keep):
        if (seen >> start) & 1:
            continue
        comp = frontier = 1 << start
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= h.rows[v]
            frontier = nxt & keep & ~comp
            comp |= frontier
        seen |= comp
        if 2 * comp.bit_count() > h.n:
            return False
    return True


def separator_size(h: Graph) -> tuple[int, frozenset[int]]:
    """Fewest vertices whose removal leaves components of at most n/2 vertices."""
    _check_order(h)
    for size in range(h.n + 1):
        for xs in combinations(range(h.n), size):
            mask = sum(1 << x for x in xs)
            if _components_small(h, mask):
                return size, frozenset(xs)
    raise AssertionError("removing every vertex always works")


def _boundary(h: Graph, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= h.rows[v]
    return out & ~mask


def _small_sets(n: int):
    for mask in range(1, 1 << n):
        if 2 * mask.bit_count() <= n:
            yield mask


def vertex_expansion(h: Graph) -> tuple[Fraction, frozenset[int]]:
    """Min |N(A)|/|A| over nonempty A with |A| <= n/2, with a witness A."""
    _check_order(h)
    best, witness = None, None
    for mask in _small_sets(h.n):
        ratio = Fraction(_boundary(h, mask).bit_count(), mask.bit_count())
        if best is None or ratio < best:
            best, witness = ratio, mask
    if best is None:
        raise ValueError("expansion needs at least two vertices")
    return best, frozenset(bits(witness))


def edge_expansion(h: Graph) -> tuple[Fraction, frozenset[int]]:
    """Min e(A, N(A))/|A| over nonempty A with |A| <= n/2, with a witness A."""
    _check_order(h)
    best, witness = None, None
    for mask in _small_sets(h.n):
        crossing = sum((h.rows[v] & ~mask).bit_count() for v in bits(mask))
        ratio = Fraction(crossing, mask.bit_count())
        if best is None or ratio < best:
            best, witness = ratio, mask
    if best is None:
        raise ValueError("expansion needs at least two vertices")
    return best, frozenset(bits(witness))


@dataclass(frozen=True)
class ExpansionReport:
    i_v: Fraction
    i_e: Fraction
    s: int
    certified_lower: Fraction
    separator: frozenset[int]
    degree: int | None

    def to_json(self) -> dict:
        return {"i_v": str(self.i_v), "i_e": str(self.i_e), "s": self.s,
                "certified_lower": str(self.certified_lower),
                "separator": sorted(self.separator), "degree": self.degree}


def lower_bound_certificate(h: Graph) -> ExpansionReport:
    """Separator size against the vertex-expansion lower bound i_v/(3+i_v)*n."""
    i_v, _ = vertex_expansion(h)
    i_e, _ = edge_expansion(h)
    s, sep = separator_size(h)
    lower = i_v / (3 + i_v) * h.n
    if s < lower:
        raise AssertionError(f"separator {s} below the expansion bound {lower}")
    d = is_regular(h)
    if d:
        if i_v < i_e / d:
            raise AssertionError(f"vertex expansion {i_v} below i_e/d = {i_e / d}")
        if d == 3 and i_v < i_e / 2:
            raise AssertionError(f"cubic vertex expansion {i_v} below i_e/2 = {i_e / 2}")
    return ExpansionReport(i_v, i_e, s, lower, sep, d)


# ---------------------------------------------------------- random seeds

def random_regular(d: int, m: int, seed: int, max_tries: int = 10000) -> Graph:
    """Pairing model with rejection of loops and repeated edges."""
    if (d * m) % 2:
        raise ValueError("d * m must be even")
    if not m > d:
        raise ValueError("order must exceed the degree")
    rng = random.Random(seed)
    points = [v for v in range(m) for _ in range(d)]
    for _ in range(max_tries):
        rng.shuffle(points)
        edges = set()
        ok = True
        for a, b in zip(points[::2], points[1::2]):
            e = (min(a, b), max(a, b))
            if a == b or e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph.from_edges(m, sorted(edges))
    raise RuntimeError(f"no simple {d}-regular graph after {max_tries} pairings")


def components_summary(g: Graph) -> list[int]:
    return sorted(len(c) for c in connected_components(g))
