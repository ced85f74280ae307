"""Simple undirected graphs stored as bit-row adjacency.

Vertices are dense 0-based integers. Row ``v`` of a graph is a Python int
whose bit ``u`` is set iff ``{u, v}`` is an edge. Graphs are immutable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

VertexSet = frozenset


class GraphFormatError(ValueError):
    """Malformed graph6 or edge-list input."""


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.rows) != self.n:
            raise ValueError("row count must equal order")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {v} has bits outside the vertex range")
            if (row >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
            r = row
            while r:
                low = r & -r
                u = low.bit_length() - 1
                if not (self.rows[u] >> v) & 1:
                    raise ValueError(f"asymmetric adjacency at ({v}, {u})")
                r ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for order {n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.rows[v])

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.rows[u]) if u < v]

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in ascending order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# ---------------------------------------------------------------- constructors

def empty(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def prism() -> Graph:
    """The triangular prism, a cubic graph on 6 vertices."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3),
                                (0, 3), (1, 4), (2, 5)])


# ------------------------------------------------------------------ operations

def complement(g: Graph) -> Graph:
    full = g.vertex_mask
    return Graph(g.n, tuple(full ^ row ^ (1 << v) for v, row in enumerate(g.rows)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    return Graph(g.n + h.n, g.rows + tuple(row << g.n for row in h.rows))


def union_all(graphs: Sequence[Graph]) -> Graph:
    out = empty(0)
    for g in graphs:
        out = disjoint_union(out, g)
    return out


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph on ``vertices``, relabelled 0.. in ascending original order."""
    keep = sorted(set(vertices))
    for v in keep:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    index = {v: i for i, v in enumerate(keep)}
    rows = []
    for v in keep:
        rows.append(to_mask(index[u] for u in bits(g.rows[v]) if u in index))
    return Graph(len(keep), tuple(rows))


def permute(g: Graph, perm: Sequence[int]) -> Graph:
    """Image of ``g`` under the relabelling ``v -> perm[v]``."""
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


def connected_components(g: Graph) -> list[VertexSet]:
    seen = 0
    comps = []
    for start in range(g.n):
        if (seen >> start) & 1:
            continue
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.rows[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(frozenset(bits(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def distance(g: Graph, u: int, v: int) -> int | None:
    """Hop distance from ``u`` to ``v``; ``None`` when unreachable."""
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            return dist[x]
        for y in bits(g.rows[x]):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return None


def is_regular(g: Graph) -> int | None:
    """The common degree if ``g`` is regular, else ``None``."""
    degs = set(g.degrees())
    if len(degs) == 1:
        return degs.pop()
    return 0 if g.n == 0 else None


# ---------------------------------------------------------- isomorphism oracle

def _refined_colors(g: Graph) -> list[tuple]:
    """Degree plus sorted neighbour degrees; an isomorphism invariant."""
    deg = g.degrees()
    return [(deg[v], tuple(sorted(deg[u] for u in bits(g.rows[v])))) for v in range(g.n)]


def _isomorphisms(g: Graph, h: Graph, first_only: bool):
    if g.n != h.n or g.num_edges() != h.num_edges():
        return
    cg, ch = _refined_colors(g), _refined_colors(h)
    if sorted(cg) != sorted(ch):
        return
    n = g.n
    # Rarest colour classes first, then by degree, so the search fails fast.
    freq: dict = {}
    for c in cg:
        freq[c] = freq.get(c, 0) + 1
    order = sorted(range(n), key=lambda v: (freq[cg[v]], -cg[v][0], v))
    candidates = {v: [w for w in range(n) if ch[w] == cg[v]] for v in range(n)}
    mapping = [-1] * n
    used = 0

    def extend(depth: int):
        nonlocal used
        if depth == n:
            yield tuple(mapping)
            return
        v = order[depth]
        for w in candidates[v]:
            if (used >> w) & 1:
                continue
            ok = True
            for u in order[:depth]:
                if g.has_edge(u, v) != h.has_edge(mapping[u], w):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = w
            used |= 1 << w
            yield from extend(depth + 1)
            used &= ~(1 << w)
            mapping[v] = -1

    for m in extend(0):
        yield m
        if first_only:
            return


def is_isomorphism(g: Graph, h: Graph, mapping: Sequence[int]) -> bool:
    if g.n != h.n or sorted(mapping) != list(range(g.n)):
        return False
    return all(g.has_edge(u, v) == h.has_edge(mapping[u], mapping[v])
               for u, v in combinations(range(g.n), 2))


def find_isomorphism(g: Graph, h: Graph) -> tuple[int, ...] | None:
    """An isomorphism ``g -> h`` as a tuple ``m`` with ``m[v]`` in ``h``, or None.

    Backtracking over degree classes with neighbour-degree pruning. Exact at
    every order; intended for orders up to about 10.
    """
    for m in _isomorphisms(g, h, first_only=True):
        if not is_isomorphism(g, h, m):
            raise AssertionError("isomorphism search produced a bad witness")
        return m
    return None


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


def automorphisms(g: Graph) -> list[tuple[int, ...]]:
    return list(_isomorphisms(g, g, first_only=False))


# --------------------------------------------------------------------- graph6

def write_graph6(g: Graph) -> str:
    if not 0 <= g.n <= 62:
        raise ValueError(f"graph6 short form supports orders 0..62, got {g.n}")
    bitlist = [1 if g.has_edge(i, j) else 0 for j in range(1, g.n) for i in range(j)]
    bitlist += [0] * (-len(bitlist) % 6)
    chars = [chr(g.n + 63)]
    for k in range(0, len(bitlist), 6):
        val = 0
        for b in bitlist[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    return "".join(chars)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string")
    codes = [ord(c) - 63 for c in s]
    if any(not 0 <= c <= 63 for c in codes):
        raise GraphFormatError("graph6 byte outside [63, 126]")
    n = codes[0]
    if n > 62:
        raise GraphFormatError("graph6 long form (order > 62) is not supported")
    nbits = n * (n - 1) // 2
    if len(codes) - 1 != (nbits + 5) // 6:
        raise GraphFormatError(f"graph6 length mismatch for order {n}")
    stream = []
    for c in codes[1:]:
        stream.extend((c >> k) & 1 for k in range(5, -1, -1))
    if any(stream[nbits:]):
        raise GraphFormatError("nonzero graph6 padding bits")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if stream[k]:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def write_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphFormatError("empty edge list")
    try:
        n = int(lines[0])
        edges = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise GraphFormatError(f"bad edge list: {exc}") from None
    if n < 0 or any(len(e) != 2 for e in edges):
        raise GraphFormatError("bad edge list shape")
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
