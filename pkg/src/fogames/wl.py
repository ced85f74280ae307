"""k-dimensional Weisfeiler-Lehman refinement on vertex k-tuples.

The initial colour of a tuple is its isomorphism type. A refinement step
recolours a tuple by its old colour together with the set (or multiset) of
vectors (W(u^{1,w}), ..., W(u^{k,w})) over all vertices w, where u^{i,w}
replaces the i-th entry by w. After each step the colours of both graphs
are sorted lexicographically and replaced by their ordinal, one renaming
shared by both graphs.

Colourings are numpy int64 arrays indexed by tuple number: the tuple
(u_1, ..., u_k) has number sum u_i * n^(k-i).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph import Graph, is_isomorphic

SET, MULTISET = "set", "multiset"


class OrderMismatchError(ValueError):
    pass


class DimensionCapExceeded(RuntimeError):
    """No dimension up to floor((n+1)/2)+1 separated a non-isomorphic pair."""


# ------------------------------------------------------- isomorphism types

@dataclass(frozen=True)
class IsoType:
    s: int
    F: tuple[int, ...]
    pattern: int  # bit for (a, b), a < b, at position index_of_pair(a, b, s)

    def edges(self) -> list[tuple[int, int]]:
        pairs = [(a, b) for a in range(1, self.s + 1) for b in range(a + 1, self.s + 1)]
        return [p for i, p in enumerate(pairs) if (self.pattern >> i) & 1]


def isotype(g: Graph, tup) -> IsoType:
    """Equality pattern F (F(i) = rank of u_i among the distinct entries in
    order of first appearance) plus the graph induced on those entries."""
    tup = tuple(tup)
    if any(not 0 <= u < g.n for u in tup):
        raise ValueError("tuple entry out of range")
    firsts: list[int] = []
    F = []
    for u in tup:
        if u not in firsts:
            firsts.append(u)
        F.append(firsts.index(u) + 1)
    s = len(firsts)
    pattern = 0
    bit = 0
    for a in range(s):
        for b in range(a + 1, s):
            if g.has_edge(firsts[a], firsts[b]):
                pattern |= 1 << bit
            bit += 1
    return IsoType(s, tuple(F), pattern)


# ------------------------------------------------------------ tuple tables

@lru_cache(maxsize=32)
def _tuples(n: int, k: int) -> np.ndarray:
    if n == 0:
        return np.zeros((0, k), dtype=np.int64)
    grids = np.indices((n,) * k).reshape(k, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


@lru_cache(maxsize=32)
def _substitutions(n: int, k: int) -> tuple[np.ndarray, ...]:
    """For each position i an (n^k, n) array: number of u^{i,w}."""
    tuples = _tuples(n, k)
    idx = np.arange(n ** k, dtype=np.int64)
    out = []
    for i in range(k):
        weight = n ** (k - 1 - i)
        base = idx - tuples[:, i] * weight
        out.append(base[:, None] + np.arange(n, dtype=np.int64)[None, :] * weight)
    return tuple(out)


def _initial_codes(g: Graph, k: int) -> np.ndarray:
    """An integer code per tuple that determines and is determined by its
    isomorphism type: equality and adjacency bits of every position pair."""
    n = g.n
    tuples = _tuples(n, k)
    adj = np.zeros((max(n, 1), max(n, 1)), dtype=np.int64)
    for u, v in g.edges():
        adj[u, v] = adj[v, u] = 1
    codes = np.zeros(len(tuples), dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            eq = (tuples[:, i] == tuples[:, j]).astype(np.int64)
            ad = adj[tuples[:, i], tuples[:, j]] if n else np.zeros(0, dtype=np.int64)
            codes = codes * 4 + eq * 2 + ad
    return codes


def _lex_rank(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dense lexicographic ranks of the rows of a non-negative int64 array,
    plus the index of one occurrence of each distinct row.

    Folds the columns left to right, re-ranking after each one, so every
    key stays a small int64 and only 1-D sorts are needed.
    """
    if rows.shape[1] == 0:
        ranks = np.zeros(len(rows), dtype=np.int64)
    else:
        ranks = np.unique(rows[:, 0], return_inverse=True)[1].reshape(-1)
        for j in range(1, rows.shape[1]):
            col = rows[:, j]
            keys = ranks * (int(col.max()) + 1) + col
            ranks = np.unique(keys, return_inverse=True)[1].reshape(-1)
    _, first = np.unique(ranks, return_index=True)
    return ranks.astype(np.int64), first


def _rename(columns: list[np.ndarray]) -> tuple[list[np.ndarray], np.ndarray]:
    """Joint lexicographic renaming of the rows of several 2-D arrays."""
    stacked = np.concatenate(columns, axis=0)
    inverse, first = _lex_rank(stacked)
    table = stacked[first]
    out, start = [], 0
    for c in columns:
        out.append(inverse[start:start + len(c)].astype(np.int64))
        start += len(c)
    return out, table


def initial_coloring(graphs: list[Graph], k: int) -> list[np.ndarray]:
    codes = [_initial_codes(g, k)[:, None] for g in graphs]
    colors, _ = _rename(codes)
    return colors


def refine(colors: list[np.ndarray], orders: list[int], k: int, variant: str = SET):
    """One joint refinement step. Returns (new colours, substitution table)
    where the table is (vector rows, signature rows), both sorted."""
    if variant not in (SET, MULTISET):
        raise ValueError(f"unknown variant {variant!r}")
    if len(colors) != len(orders) or any(len(c) != n ** k for c, n in zip(colors, orders)):
        raise ValueError("colourings do not match the orders and dimension")
    vectors = []
    for c, n in zip(colors, orders):
        subs = _substitutions(n, k)
        vec = np.stack([c[s] for s in subs], axis=-1) if n else np.zeros((0, 0, k), np.int64)
        vectors.append(vec.reshape(-1, k))
    vec_ids, vec_table = _rename(vectors)
    sentinel = len(vec_table)
    width = max(orders)
    signatures = []
    for c, n, ids in zip(colors, orders, vec_ids):
        rows = np.sort(ids.reshape(len(c), n), axis=1) if n else np.zeros((len(c), 0), np.int64)
        if variant == SET and n > 1:
            dup = np.zeros_like(rows, dtype=bool)
            dup[:, 1:] = rows[:, 1:] == rows[:, :-1]
            rows = np.where(dup, sentinel, rows)
            rows = np.sort(rows, axis=1)
        if n < width:
            pad = np.full((len(c), width - n), sentinel, dtype=np.int64)
            rows = np.concatenate([rows, pad], axis=1)
        signatures.append(np.concatenate([c[:, None], rows], axis=1))
    new, sig_table = _rename(signatures)
    return new, (vec_table, sig_table)


def _num_colors(colors: list[np.ndarray]) -> int:
    return len(np.unique(np.concatenate(colors))) if sum(len(c) for c in colors) else 0


def _refines(new: list[np.ndarray], old: list[np.ndarray]) -> bool:
    a, b = np.concatenate(new), np.concatenate(old)
    pairs = np.unique(np.stack([a, b], axis=1), axis=0)
    return len(pairs) == len(np.unique(a))


# --------------------------------------------------------------- outputs

@dataclass
class Stabilization:
    k: int
    variant: str
    colors: list[np.ndarray]  # after R + 1 steps
    R: int
    counts: list[int]  # colour count after each step, starting with step 0

    @property
    def steps(self) -> int:
        return self.R + 1


def wl_stabilize(g: Graph, h: Graph, k: int, variant: str = SET,
                 history: list | None = None) -> Stabilization:
    """Refine jointly until the partition of all tuples stops changing.

    ``history``, when given, receives the colourings after every step.
    """
    if k < 1:
        raise ValueError("dimension must be at least 1")
    orders = [g.n, h.n]
    colors = initial_coloring([g, h], k)
    counts = [_num_colors(colors)]
    if history is not None:
        history.append(colors)
    r = 0
    while True:
        new, _ = refine(colors, orders, k, variant)
        r += 1
        if not _refines(new, colors):
            raise AssertionError("refinement step coarsened the partition")
        counts.append(_num_colors(new))
        if history is not None:
            history.append(new)
        colors = new
        if counts[-1] == counts[-2]:
            break
    R = r - 1
    if not R < g.n ** k + h.n ** k:
        raise AssertionError(f"stabilization took {R} steps, beyond |G|^k + |H|^k")
    return Stabilization(k, variant, colors, R, counts)


def _diagonal(n: int, k: int) -> np.ndarray:
    step = sum(n ** (k - 1 - i) for i in range(k))
    return np.arange(n, dtype=np.int64) * step


def wl_iso_test(g: Graph, h: Graph, k: int, variant: str = SET) -> str:
    if g.n != h.n:
        raise OrderMismatchError("isomorphism testing needs graphs of equal order")
    st = wl_stabilize(g, h, k, variant)
    diag = _diagonal(g.n, k)
    same = set(st.colors[0][diag].tolist()) == set(st.colors[1][diag].tolist())
    return "isomorphic" if same else "non-isomorphic"


def dimension_cap(n: int) -> int:
    return (n + 1) // 2 + 1


def wl_optimal_dimension(g: Graph, h: Graph, variant: str = SET, check: bool = True) -> int:
    """Least k at which the test separates the pair."""
    if g.n != h.n:
        raise OrderMismatchError("optimal dimension needs graphs of equal order")
    if check and g.n <= 12 and is_isomorphic(g, h):
        raise ValueError("inputs are isomorphic")
    cap = dimension_cap(g.n)
    for k in range(1, cap + 1):
        if wl_iso_test(g, h, k, variant) == "non-isomorphic":
            return k
    raise DimensionCapExceeded(
        f"no dimension up to {cap} separates this order-{g.n} pair")


def distinguishing_dimension(g: Graph, h: Graph, variant: str = MULTISET,
                             max_k: int = 3) -> int | None:
    """Least k <= max_k that separates, or None. A separation certifies
    non-isomorphism because isomorphic inputs always get equal colours."""
    if g.n != h.n:
        return 0
    for k in range(1, max_k + 1):
        if wl_iso_test(g, h, k, variant) == "non-isomorphic":
            return k
    return None


# ---------------------------------------------------------- canonization

@dataclass(frozen=True)
class Certificate:
    k: int
    variant: str
    order: int
    steps: int
    stable_from: int  # tables from this step on repeat the last stored one
    tables: tuple[bytes, ...]
    diagonal: tuple[int, ...]
    # raw isomorphism-type code behind each initial colour id; without it
    # graphs such as K4 and E4 would share every renumbered table
    initial_types: tuple[int, ...] = ()

    def to_bytes(self) -> bytes:
        header = f"{self.k}:{self.variant}:{self.order}:{self.steps}:{self.stable_from}:"
        types = ",".join(map(str, self.initial_types)).encode()
        parts = [header.encode(), f"{len(types)}:".encode() + types]
        for t in self.tables:
            parts.append(f"{len(t)}:".encode() + t)
        diag = ",".join(map(str, self.diagonal)).encode()
        parts.append(f"{len(diag)}:".encode() + diag)
        return b"".join(parts)

    def digest(self) -> str:
        return hashlib.sha256(self.to_bytes()).hexdigest()


def _table_bytes(table: tuple[np.ndarray, np.ndarray]) -> bytes:
    vec, sig = table
    rows = [",".join(map(str, r)) for r in vec.tolist()]
    rows.append("|")
    rows += [",".join(map(str, r)) for r in sig.tolist()]
    return ";".join(rows).encode()


def wl_canonical_form(g: Graph, k: int, variant: str = SET) -> Certificate:
    """Run 2n^k - 1 steps on ``g`` alone and return the diagonal colours with
    every substitution table.

    Once a step leaves every colour id unchanged, all later steps repeat the
    same table and ids, so storage stops there and ``stable_from`` records it.
    """
    if k < 1:
        raise ValueError("dimension must be at least 1")
    steps = 2 * g.n ** k - 1
    colors, initial_table = _rename([_initial_codes(g, k)[:, None]])
    tables = []
    stable_from = steps
    for r in range(1, steps + 1):
        new, table = refine(colors, [g.n], k, variant)
        tables.append(_table_bytes(table))
        if np.array_equal(new[0], colors[0]):
            stable_from = r
            colors = new
            break
        colors = new
    diag = _diagonal(g.n, k)
    diagonal = tuple(sorted(set(colors[0][diag].tolist())))
    return Certificate(k, variant, g.n, steps, stable_from, tuple(tables), diagonal,
                       tuple(initial_table[:, 0].tolist()))
