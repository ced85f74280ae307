"""A constructive Spoiler that wins without searching the game tree.

Phase 1 pebbles a C-maximal set X of the smaller graph: a set such that no
extra vertex would split the remaining vertices into more classes by
adjacency to X. Phase 2 compares the class structure on both sides, as seen
through the pebbles, and attacks the first defect it finds. The defect checks
run in a fixed order:

1. a class with no counterpart,
2. a singleton class paired with a larger one,
3. two singleton classes whose adjacency disagrees across the graphs,
4. a refined class (pattern over X plus the singletons) with no counterpart,
5. a refined class, or pair of them, that is not homogeneous in the same way
   as its counterpart,
6. a refined class whose size differs from its counterpart ("useful").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, is_isomorphic
from .similarity import similarity_partition, oplus
from .solver import (G_SIDE, H_SIDE, SIDE_NAMES, IsomorphicInputsError, Pair, ReplyOracle,
                     is_alive)

CLAIM_WIN = "claim-win"


class StrategyError(RuntimeError):
    """The constructive strategy reached a state it should never reach."""


class ExceptionShapeError(ValueError):
    """The larger graph only adds similar copies of one vertex of the smaller."""


# ------------------------------------------------------------ partitions

def adjacency_pattern(g: Graph, v: int, seq: Sequence[int]) -> int:
    """Bit i is set iff ``v`` is adjacent to ``seq[i]``."""
    row = g.rows[v]
    p = 0
    for i, x in enumerate(seq):
        if (row >> x) & 1:
            p |= 1 << i
    return p


def group_by_pattern(g: Graph, vertices, seq: Sequence[int]) -> dict[int, frozenset[int]]:
    groups: dict[int, set[int]] = {}
    for v in sorted(vertices):
        groups.setdefault(adjacency_pattern(g, v, seq), set()).add(v)
    return {p: frozenset(c) for p, c in groups.items()}


def _by_min(groups: dict[int, frozenset[int]]) -> list[tuple[int, frozenset[int]]]:
    return sorted(groups.items(), key=lambda item: min(item[1]))


@dataclass(frozen=True)
class PartitionState:
    graph: Graph
    X: tuple[int, ...]
    classes: tuple[frozenset[int], ...]
    Y: frozenset[int]
    Z: frozenset[int]
    dclasses: tuple[frozenset[int], ...]

    @property
    def num_classes(self) -> int:
        return len(self.classes)


def cx_partition(g: Graph, X: Sequence[int]) -> PartitionState:
    X = tuple(X)
    if any(not 0 <= x < g.n for x in X) or len(set(X)) != len(X):
        raise ValueError("X must list distinct vertices of g")
    rest = [v for v in range(g.n) if v not in X]
    classes = tuple(c for _, c in _by_min(group_by_pattern(g, rest, X)))
    Y = frozenset(v for c in classes if len(c) == 1 for v in c)
    Z = frozenset(rest) - Y
    dclasses = tuple(c for _, c in _by_min(group_by_pattern(g, Z, X + tuple(sorted(Y)))))
    return PartitionState(g, X, classes, Y, Z, dclasses)


def count_classes(g: Graph, X: Sequence[int]) -> int:
    rest = [v for v in range(g.n) if v not in X]
    return len(group_by_pattern(g, rest, tuple(X)))


def c_maximal_set(g: Graph) -> PartitionState:
    """Greedy: keep adding the lowest vertex that increases the class count."""
    if g.n == 0:
        raise ValueError("graph must have at least one vertex")
    X: list[int] = []
    current = count_classes(g, X)
    improved = True
    while improved:
        improved = False
        for v in range(g.n):
            if v in X:
                continue
            count = count_classes(g, X + [v])
            if count > current:
                X.append(v)
                current = count
                improved = True
                break
    return cx_partition(g, X)


def is_c_maximal(g: Graph, X: Sequence[int]) -> bool:
    base = count_classes(g, X)
    return all(count_classes(g, list(X) + [v]) <= base for v in range(g.n) if v not in X)


# --------------------------------------------------------------- matching

@dataclass(frozen=True)
class PhiMatch:
    pairs: tuple[tuple[int, int], ...]  # (class index in g, class index in h)
    defect: dict | None
    useful: tuple[tuple[int, int], ...]

    @property
    def perfect(self) -> bool:
        return self.defect is None


def phi_match(state: PartitionState, state2: PartitionState, phi: Sequence[Pair]) -> PhiMatch:
    """Pair the classes of ``state`` and ``state2`` that agree through ``phi``.

    ``phi`` lists (x in g, x' in h) with x running over ``state.X`` in order.
    """
    g, h = state.graph, state2.graph
    if tuple(a for a, _ in phi) != state.X or tuple(b for _, b in phi) != state2.X:
        raise ValueError("phi must map state.X onto state2.X in order")
    if not is_alive(g, h, list(phi)):
        raise ValueError("phi is not a partial isomorphism")
    X, X2 = state.X, state2.X
    pat_g = [adjacency_pattern(g, min(c), X) for c in state.classes]
    pat_h = {adjacency_pattern(h, min(c), X2): j for j, c in enumerate(state2.classes)}
    pairs = []
    defect = None
    matched_h = set()
    for i, p in enumerate(pat_g):
        j = pat_h.get(p)
        if j is None:
            defect = defect or {"kind": "unmatched", "side": "G", "class": sorted(state.classes[i])}
            continue
        pairs.append((i, j))
        matched_h.add(j)
    for j, c in enumerate(state2.classes):
        if j not in matched_h:
            defect = defect or {"kind": "unmatched", "side": "H", "class": sorted(c)}
    if defect is None:
        for i, j in pairs:
            a, b = len(state.classes[i]), len(state2.classes[j])
            if (a == 1) != (b == 1):
                defect = {"kind": "singleton-mismatch", "side": "G" if a > 1 else "H",
                          "class": sorted(state.classes[i] if a > 1 else state2.classes[j])}
                break
    useful = tuple((i, j) for i, j in pairs
                   if len(state.classes[i]) != len(state2.classes[j]))
    return PhiMatch(tuple(pairs), defect, useful)


# --------------------------------------------------------------- the plan

class _Dead(Exception):
    pass


@dataclass
class SpoilerPlan:
    g: Graph
    h: Graph
    swapped: bool
    state: PartitionState
    predicted_rounds: int
    phase: str = "phase1"
    alternations: int = 0
    moves: list = field(default_factory=list)

    @property
    def X(self) -> tuple[int, ...]:
        return self.state.X


def find_exception_vertex(small: Graph, big: Graph) -> int | None:
    """A vertex v with big isomorphic to oplus(small, v, |big| - |small|)."""
    extra = big.n - small.n
    if extra <= 0:
        return None
    for cls in similarity_partition(small).classes:
        if len(cls) >= 2 and is_isomorphic(oplus(small, min(cls), extra), big):
            return min(cls)
    return None


def make_plan(g: Graph, h: Graph) -> SpoilerPlan:
    """Plan for the pair (g, h); the C-maximal set is taken in the smaller graph
    (in g when the orders are equal)."""
    swapped = h.n < g.n
    small, big = (h, g) if swapped else (g, h)
    v = find_exception_vertex(small, big)
    if v is not None:
        raise ExceptionShapeError(
            f"the larger graph is the smaller one plus {big.n - small.n} copies similar to vertex {v}")
    state = c_maximal_set(small)
    part = similarity_partition(small)
    outside = [u for u in range(small.n) if u not in state.X]
    predicted = len(state.X) + max((part.sigma_of(u) for u in outside), default=0) + 2
    return SpoilerPlan(small, big, swapped, state, predicted)


def spoiler_next_move(plan: SpoilerPlan, history: Sequence[tuple[tuple[int, int], int]]):
    """Next (side, vertex) for Spoiler, or ``CLAIM_WIN``.

    ``history`` lists ((side, vertex), reply) for the rounds played so far,
    with sides and vertices given for the caller's (g, h) order. The plan is
    replayed from the start, so the same history always yields the same move.
    """
    gen = _Strategy(plan).run()
    move = next(gen)
    for past, reply in history:
        if move == CLAIM_WIN or _external(plan, move) != tuple(past):
            raise ValueError("history does not follow this plan")
        move = gen.send(reply)
    if move == CLAIM_WIN:
        plan.phase = "done"
        return CLAIM_WIN
    ext = _external(plan, move)
    sides = [m[0] for m, _ in history] + [ext[0]]
    plan.alternations = sum(1 for a, b in zip(sides, sides[1:]) if a != b)
    plan.phase = "phase1" if len(history) < len(plan.X) else "phase2"
    plan.moves = [m for m, _ in history] + [ext]
    if plan.alternations > 1:
        raise StrategyError("constructive strategy used more than one alternation")
    return ext


def _external(plan: SpoilerPlan, move: tuple[int, int]) -> tuple[int, int]:
    side, v = move
    return (1 - side if plan.swapped else side, v)


class _Strategy:
    """Generator-driven replay of the plan in internal coordinates, where the
    G side is the graph that holds X."""

    def __init__(self, plan: SpoilerPlan):
        self.g, self.h = plan.g, plan.h
        self.X = plan.state.X
        self.pairs: list[Pair] = []

    def graph(self, side: int) -> Graph:
        return self.g if side == G_SIDE else self.h

    def run(self):
        try:
            yield from self._strategy()
        except _Dead:
            pass
        else:
            raise StrategyError("strategy ran out of moves without a win")
        while True:
            yield CLAIM_WIN

    def select(self, side: int, v: int):
        reply = yield (side, v)
        self.pairs.append((v, reply) if side == G_SIDE else (reply, v))
        if not is_alive(self.g, self.h, self.pairs):
            raise _Dead
        return reply

    def punish(self, side: int, v: int, u: int, seq_g, seq_h):
        """``v`` was selected on ``side`` and answered by ``u`` on the other side
        with a different pattern over the pebbled-or-singleton sequence. Select
        the counterpart of a separating vertex on ``side``."""
        seq = {G_SIDE: seq_g, H_SIDE: seq_h}
        other = 1 - side
        go, gs = self.graph(other), self.graph(side)
        for w, w_mate in zip(seq[other], seq[side]):
            if go.has_edge(u, w) != gs.has_edge(v, w_mate):
                yield from self.select(side, w_mate)
                raise StrategyError("separating vertex did not end the game")
        raise StrategyError("reply agrees on every separating vertex")

    def _strategy(self):
        g, h = self.g, self.h
        for x in self.X:
            yield from self.select(G_SIDE, x)
        X = self.X
        Xp = tuple(b for _, b in self.pairs)

        classes_g = dict(_by_min(group_by_pattern(g, [v for v in range(g.n) if v not in X], X)))
        classes_h = dict(_by_min(group_by_pattern(h, [v for v in range(h.n) if v not in Xp], Xp)))

        # 1. a class with no counterpart
        for side, mine, theirs in ((G_SIDE, classes_g, classes_h), (H_SIDE, classes_h, classes_g)):
            for p, cls in _by_min(mine):
                if p not in theirs:
                    yield from self.select(side, min(cls))
                    raise StrategyError("unmatched class did not end the game")

        matched = [(classes_g[p], classes_h[p]) for p, _ in _by_min(classes_g)]

        # 2. a singleton paired with a larger class
        for cg, ch in matched:
            if (len(cg) == 1) != (len(ch) == 1):
                side, big = (G_SIDE, cg) if len(cg) > 1 else (H_SIDE, ch)
                a, b = sorted(big)[:2]
                yield from self.select(side, a)
                yield from self.select(side, b)
                raise StrategyError("two picks in a larger class did not end the game")

        # 3. singletons whose mutual adjacency disagrees
        ys = [(min(cg), min(ch)) for cg, ch in matched if len(cg) == 1]
        for i, (yi, yi2) in enumerate(ys):
            for yj, yj2 in ys[i + 1:]:
                if g.has_edge(yi, yj) != h.has_edge(yi2, yj2):
                    yield from self.select(G_SIDE, yi)
                    yield from self.select(G_SIDE, yj)
                    raise StrategyError("singleton pair did not end the game")

        seq_g = X + tuple(y for y, _ in ys)
        seq_h = Xp + tuple(y for _, y in ys)
        z_g = [v for cg, _ in matched if len(cg) > 1 for v in cg]
        z_h = [v for _, ch in matched if len(ch) > 1 for v in ch]
        d_g = group_by_pattern(g, z_g, seq_g)
        d_h = group_by_pattern(h, z_h, seq_h)
        class_of_g = {v: cg for cg, _ in matched for v in cg}

        # 4. a refined class with no counterpart
        for side, mine, theirs in ((G_SIDE, d_g, d_h), (H_SIDE, d_h, d_g)):
            for p, cls in _by_min(mine):
                if p not in theirs:
                    v = min(cls)
                    u = yield from self.select(side, v)
                    yield from self.punish(side, v, u, seq_g, seq_h)

        dpairs = [(d_g[p], d_h[p]) for p, _ in _by_min(d_g)]

        # 5. homogeneity of refined classes and of their pairs, read off g
        def g_type(a: frozenset, b: frozenset | None = None) -> bool:
            if b is None:
                c = class_of_g[min(a)]
                u, w = sorted(c)[:2]
                return g.has_edge(u, w)
            return g.has_edge(min(a), min(b))

        for dg, dh in dpairs:
            want = g_type(dg)
            vs = sorted(dh)
            for i, a in enumerate(vs):
                for b in vs[i + 1:]:
                    if h.has_edge(a, b) != want:
                        yield from self.select(H_SIDE, a)
                        yield from self.select(H_SIDE, b)
                        raise StrategyError("inhomogeneous refined class did not end the game")
        for i, (dg, dh) in enumerate(dpairs):
            for dg2, dh2 in dpairs[i + 1:]:
                want = g_type(dg, dg2)
                for a in sorted(dh):
                    for b in sorted(dh2):
                        if h.has_edge(a, b) != want:
                            yield from self.select(H_SIDE, a)
                            yield from self.select(H_SIDE, b)
                            raise StrategyError("inhomogeneous class pair did not end the game")

        # 6. exploit the useful class needing the fewest picks
        useful = [(min(len(dg), len(dh)), k) for k, (dg, dh) in enumerate(dpairs)
                  if len(dg) != len(dh)]
        if not useful:
            raise IsomorphicInputsError("no useful class: the graphs are isomorphic")
        m, k = min(useful)
        dg, dh = dpairs[k]
        side, big, small = (G_SIDE, dg, dh) if len(dg) > len(dh) else (H_SIDE, dh, dg)
        for v in sorted(big)[:m + 1]:
            u = yield from self.select(side, v)
            if u not in small:
                yield from self.punish(side, v, u, seq_g, seq_h)
        raise StrategyError("useful class ran out without a win")


# ------------------------------------------------------------ simulation

def simulate_match(g: Graph, h: Graph, duplicator: ReplyOracle, round_cap: int,
                   plan: SpoilerPlan | None = None) -> dict:
    """Play the constructive Spoiler against ``duplicator``.

    The oracle is called as ``duplicator(pairs, sides, side, vertex)``.
    """
    plan = plan or make_plan(g, h)
    history: list[tuple[tuple[int, int], int]] = []
    pairs: list[Pair] = []
    sides: list[int] = []
    entries = []
    winner = None
    note = None
    while winner is None:
        try:
            move = spoiler_next_move(plan, history)
        except IsomorphicInputsError:
            winner, note = "duplicator", "spoiler has no useful class"
            break
        if move == CLAIM_WIN:
            if is_alive(g, h, pairs):
                raise StrategyError("strategy claimed a win on an alive position")
            winner = "spoiler"
            break
        if len(history) >= round_cap:
            winner, note = "duplicator", "round cap reached"
            break
        side, v = move
        reply = duplicator(tuple(pairs), tuple(sides), side, v)
        history.append((move, reply))
        pairs.append((v, reply) if side == G_SIDE else (reply, v))
        sides.append(side)
        alive = is_alive(g, h, pairs)
        entries.append({"round": len(history), "side": SIDE_NAMES[side], "vertex": v,
                        "reply": reply, "alive": alive})
        if not alive:
            winner = "spoiler"
    alternations = sum(1 for a, b in zip(sides, sides[1:]) if a != b)
    out = {"winner": winner, "rounds": len(history), "alternations": alternations,
           "entries": entries}
    if note:
        out["note"] = note
    return out
