"""Exhaustive graph catalogues and the named-graph mini language.

Enumeration up to isomorphism grows each order from the previous one by
adding a vertex with every possible neighbourhood, then buckets candidates
by a canonical form: the smallest upper-triangle bit string over all vertex
permutations. Exact and dependency-free for orders up to 7.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations, permutations
from pathlib import Path

import numpy as np

from .graph import (Graph, GraphFormatError, complete, complete_bipartite, cycle, empty,
                    is_regular, parse_edge_list, parse_graph6, path, prism, union_all,
                    write_graph6)

MAX_CATALOGUE_ORDER = 7

# OEIS A000088: graphs on n unlabelled vertices.
GRAPH_COUNTS = (1, 1, 2, 4, 11, 34, 156, 1044, 12346)


@lru_cache(maxsize=None)
def _perm_index(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    perms = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    ii = np.array([p[0] for p in pairs], dtype=np.int64)
    jj = np.array([p[1] for p in pairs], dtype=np.int64)
    weights = np.array([1 << (len(pairs) - 1 - k) for k in range(len(pairs))], dtype=np.int64)
    return perms[:, ii], perms[:, jj], weights


def canonical_code(g: Graph) -> int:
    """Minimum over relabellings of the upper-triangle bits read as an integer."""
    n = g.n
    if n <= 1:
        return 0
    if n > 8:
        raise ValueError("canonical_code enumerates n! permutations; order must be <= 8")
    adj = np.zeros((n, n), dtype=np.int64)
    for u, v in g.edges():
        adj[u, v] = adj[v, u] = 1
    pi, pj, weights = _perm_index(n)
    codes = adj[pi, pj] @ weights
    return int(codes.min())


def from_code(n: int, code: int) -> Graph:
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    m = len(pairs)
    return Graph.from_edges(n, [p for k, p in enumerate(pairs) if (code >> (m - 1 - k)) & 1])


@lru_cache(maxsize=None)
def all_graphs(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of order ``n`` (n <= 7).

    Representatives are the canonical forms, sorted by canonical code.
    """
    if not 0 <= n <= MAX_CATALOGUE_ORDER:
        raise ValueError(f"catalogue covers orders 0..{MAX_CATALOGUE_ORDER}")
    if n == 0:
        return (empty(0),)
    codes = set()
    for g in all_graphs(n - 1):
        for nbhd in range(1 << (n - 1)):
            rows = tuple(r | (((nbhd >> v) & 1) << (n - 1)) for v, r in enumerate(g.rows))
            codes.add(canonical_code(Graph(n, rows + (nbhd,))))
    out = tuple(from_code(n, c) for c in sorted(codes))
    if len(out) != GRAPH_COUNTS[n]:
        raise AssertionError(f"enumerated {len(out)} graphs of order {n}")
    return out


def all_pairs(n: int) -> list[tuple[Graph, Graph]]:
    """All unordered pairs of non-isomorphic graphs of order ``n``."""
    return list(combinations(all_graphs(n), 2))


def regular_graphs(d: int, n: int) -> list[Graph]:
    """All d-regular graphs of order ``n`` up to isomorphism (small orders)."""
    if n <= MAX_CATALOGUE_ORDER:
        return [g for g in all_graphs(n) if is_regular(g) == d]
    return _regular_by_search(d, n)


def _regular_by_search(d: int, n: int) -> list[Graph]:
    from .graph import is_isomorphic

    if (d * n) % 2 or d >= n:
        return []
    found: list[Graph] = []
    deg = [0] * n
    rows = [0] * n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def place(k: int) -> None:
        if all(x == d for x in deg):
            g = Graph(n, tuple(rows))
            if not any(is_isomorphic(g, h) for h in found):
                found.append(g)
            return
        if k == len(pairs):
            return
        i, j = pairs[k]
        # Vertex i must be saturated before the scan moves past its last pair.
        remaining_i = n - 1 - j
        if deg[i] + remaining_i + 1 < d:
            return
        if deg[i] < d and deg[j] < d:
            deg[i] += 1
            deg[j] += 1
            rows[i] |= 1 << j
            rows[j] |= 1 << i
            place(k + 1)
            deg[i] -= 1
            deg[j] -= 1
            rows[i] &= ~(1 << j)
            rows[j] &= ~(1 << i)
        if deg[i] + remaining_i >= d:
            place(k + 1)

    # Fix the neighbourhood of vertex 0 to cut labelled symmetry.
    for j in range(1, d + 1):
        deg[0] += 1
        deg[j] += 1
        rows[0] |= 1 << j
        rows[j] |= 1 << 0
    place(n - 1)
    return found


# ------------------------------------------------------------ named graphs

_NAME = re.compile(r"^(K|P|C|E)(\d+)$")
_BIPARTITE = re.compile(r"^K\{?(\d+),(\d+)\}?$")


def named_graph(name: str) -> Graph:
    """Build ``Kn``, ``Pn``, ``Cn``, ``En``, ``K{a,b}``/``Ka,b``, ``prism``,
    or a disjoint union of those joined with ``+``."""
    parts = [p.strip() for p in name.split("+")]
    if len(parts) > 1:
        return union_all([named_graph(p) for p in parts])
    token = parts[0]
    if token == "prism":
        return prism()
    m = _BIPARTITE.match(token)
    if m:
        return complete_bipartite(int(m.group(1)), int(m.group(2)))
    m = _NAME.match(token)
    if not m:
        raise GraphFormatError(f"unknown graph name {token!r}")
    kind, n = m.group(1), int(m.group(2))
    return {"K": complete, "P": path, "C": cycle, "E": empty}[kind](n)


def load_graph(spec: str) -> Graph:
    """Resolve a command-line graph argument.

    Accepts a file path (optionally prefixed ``@``) holding a graph6 line or
    an edge list, a built-in name, or a graph6 string.
    """
    path = Path(spec[1:]) if spec.startswith("@") else Path(spec)
    try:
        is_file = path.is_file()
    except OSError:  # long graph6 strings exceed the file-name limit
        is_file = False
    if spec.startswith("@") or is_file:
        text = path.read_text().strip()
        first = text.splitlines()[0] if text else ""
        # graph6 never starts with a digit (first byte is n + 63).
        if first.isdigit():
            return parse_edge_list(text)
        return parse_graph6(first)
    try:
        return named_graph(spec)
    except GraphFormatError:
        pass
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
    return parse_graph6(spec)


def describe(g: Graph) -> str:
    return write_graph6(g)
