"""Exact solver for the Ehrenfeucht game on two graphs.

Spoiler picks a structure and an unpebbled vertex there; Duplicator answers
in the other structure. Spoiler wins once the pebbled pairs stop being a
partial isomorphism. Searches are memoized per solver and reduce positions
by similarity classes: any permutation inside a similarity class is an
automorphism, so pebbled vertices can be renamed to the lowest class members
and only one unpebbled vertex per class needs to be tried.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .graph import Graph, is_isomorphic
from .logic import Adj, And, Eq, Exists, Forall, Formula, Not, Or
from .similarity import similarity_partition

G_SIDE, H_SIDE = 0, 1
SIDE_NAMES = ("G", "H")
UNLIMITED = None

Pair = tuple[int, int]


class IsomorphicInputsError(ValueError):
    pass


class BudgetError(ValueError):
    """Spoiler has no win within the requested rounds/alternations."""


class BoundViolation(AssertionError):
    """A computed value broke a proven upper bound."""


@dataclass(frozen=True)
class GameConfig:
    pairs: tuple[Pair, ...] = ()
    side_last: int | None = None
    alternations_left: int | None = UNLIMITED

    @classmethod
    def make(cls, pairs: Iterable[Pair] = (), side_last: int | None = None,
             alternations_left: int | None = UNLIMITED) -> "GameConfig":
        return cls(tuple(sorted(set(pairs))), side_last, alternations_left)


@dataclass
class SolveResult:
    rank: int
    alternations_used: int | None = None
    formula: Formula | None = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"rank": self.rank, "alternations_used": self.alternations_used}
        if self.formula is not None:
            from .logic import to_text

            out["formula"] = to_text(self.formula)
        return out


def is_alive(g: Graph, h: Graph, pairs: Sequence[Pair]) -> bool:
    """Do the pairs define a partial isomorphism (equality and adjacency kept)?"""
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[i + 1:]:
            if (a == c) != (b == d):
                return False
            if g.has_edge(a, c) != h.has_edge(b, d):
                return False
    return True


def _check_non_isomorphic(g: Graph, h: Graph) -> None:
    if g.n == h.n and g.n <= 12 and is_isomorphic(g, h):
        raise IsomorphicInputsError("inputs are isomorphic; Spoiler never wins")


class GameSolver:
    """Memoized game search for one ordered pair of graphs."""

    def __init__(self, g: Graph, h: Graph, symmetry: bool = True):
        self.graphs = (g, h)
        self.rows = (g.rows, h.rows)
        self.orders = (g.n, h.n)
        self.symmetry = symmetry
        self.nodes = 0
        self._memo: dict[tuple, list[int]] = {}
        if symmetry:
            parts = (similarity_partition(g), similarity_partition(h))
            self._class_of = tuple(p.class_of for p in parts)
            self._members = tuple(tuple(tuple(sorted(c)) for c in p.classes) for p in parts)
        else:
            self._class_of = tuple(tuple(range(x.n)) for x in (g, h))
            self._members = tuple(tuple((v,) for v in range(x.n)) for x in (g, h))

    # ---------------------------------------------------------- positions

    def canon(self, pairs: Iterable[Pair]) -> tuple[Pair, ...]:
        """Representative of an alive injective configuration. Repeated
        pairs (a re-pebbled vertex answered by its partner) collapse."""
        pairs = tuple(set(pairs))
        if not self.symmetry:
            return tuple(sorted(pairs))
        cg, ch = self._class_of
        items = sorted((cg[a], ch[b]) for a, b in pairs)
        used_g: dict[int, int] = {}
        used_h: dict[int, int] = {}
        out = []
        mg, mh = self._members
        for ka, kb in items:
            ia = used_g.get(ka, 0)
            ib = used_h.get(kb, 0)
            used_g[ka] = ia + 1
            used_h[kb] = ib + 1
            out.append((mg[ka][ia], mh[kb][ib]))
        return tuple(sorted(out))

    def _pattern(self, side: int, x: int, cfg: Sequence[Pair]) -> int:
        row = self.rows[side][x]
        p = 0
        for i, pair in enumerate(cfg):
            if (row >> pair[side]) & 1:
                p |= 1 << i
        return p

    def _reps(self, side: int, pebbled: int) -> list[int]:
        """Lowest unpebbled member of each class on ``side``."""
        out = []
        for members in self._members[side]:
            for v in members:
                if not (pebbled >> v) & 1:
                    out.append(v)
                    break
        return out

    def moves(self, cfg: Sequence[Pair], side: int) -> list[tuple[int, list[int]]]:
        """Spoiler moves on ``side`` with Duplicator's legal reply representatives,
        fewest replies first."""
        other = 1 - side
        peb = [0, 0]
        for a, b in cfg:
            peb[0] |= 1 << a
            peb[1] |= 1 << b
        by_pattern: dict[int, list[int]] = {}
        for y in self._reps(other, peb[other]):
            by_pattern.setdefault(self._pattern(other, y, cfg), []).append(y)
        out = [(x, by_pattern.get(self._pattern(side, x, cfg), []))
               for x in self._reps(side, peb[side])]
        out.sort(key=lambda m: len(m[1]))
        return out

    @staticmethod
    def _pair(side: int, x: int, y: int) -> Pair:
        return (x, y) if side == G_SIDE else (y, x)

    @staticmethod
    def _allowed(side_last: int | None, alt: int | None) -> tuple[int, ...]:
        if side_last is None or alt is None or alt > 0:
            return (G_SIDE, H_SIDE)
        return (side_last,)

    @staticmethod
    def _after(side: int, side_last: int | None, alt: int | None) -> int | None:
        if alt is None or side_last is None or side == side_last:
            return alt
        return alt - 1

    # ------------------------------------------------------------- search

    def wins(self, cfg: tuple[Pair, ...], rounds: int, side_last: int | None = None,
             alt: int | None = UNLIMITED) -> bool:
        """Spoiler wins within ``rounds`` from an alive canonical ``cfg``."""
        if rounds <= 0:
            return False
        key = (cfg, None if alt is None else side_last, alt)
        entry = self._memo.get(key)
        if entry is not None:
            if rounds >= entry[1]:
                return True
            if rounds <= entry[0]:
                return False
        else:
            entry = self._memo[key] = [0, 1 << 30]
        result = self._search(cfg, rounds, side_last, alt)
        if result:
            entry[1] = min(entry[1], rounds)
        else:
            entry[0] = max(entry[0], rounds)
        return result

    def _search(self, cfg, rounds, side_last, alt) -> bool:
        self.nodes += 1
        candidates = []
        for side in self._allowed(side_last, alt):
            for x, replies in self.moves(cfg, side):
                if not replies:
                    return True
                candidates.append((len(replies), side, x, replies))
        if rounds == 1:
            return False
        candidates.sort(key=lambda c: c[0])
        for _, side, x, replies in candidates:
            nalt = self._after(side, side_last, alt)
            if all(self.wins(self.canon(cfg + (self._pair(side, x, y),)), rounds - 1, side, nalt)
                   for y in replies):
                return True
        return False

    def winning_move(self, cfg: Sequence[Pair], rounds: int, side_last: int | None = None,
                     alt: int | None = UNLIMITED) -> tuple[int, int] | None:
        """A (side, vertex) that wins within ``rounds`` from a possibly
        non-canonical alive ``cfg``, or None."""
        if rounds <= 0:
            return None
        cfg = tuple(cfg)
        for side in self._allowed(side_last, alt):
            nalt = self._after(side, side_last, alt)
            for x, replies in self.moves(cfg, side):
                if all(self.wins(self.canon(cfg + (self._pair(side, x, y),)), rounds - 1,
                                 side, nalt) for y in replies):
                    return side, x
        return None

    def rounds_needed(self, cfg: Sequence[Pair], side_last: int | None = None,
                      alt: int | None = UNLIMITED, cap: int | None = None) -> int | None:
        """Least r with a Spoiler win from ``cfg`` (None if none up to ``cap``)."""
        if not is_alive(*self.graphs, cfg):
            return 0
        canon = self.canon(cfg)
        cap = self.round_cap() if cap is None else cap
        for r in range(1, cap + 1):
            if self.wins(canon, r, side_last, alt):
                return r
        return None

    def round_cap(self) -> int:
        # Non-isomorphic graphs are told apart by an alternation-free
        # sentence of rank max(n, n') + 1 at most.
        return max(self.orders) + 1

    def rank(self, alternations: int | None = UNLIMITED) -> int:
        r = self.rounds_needed((), None, alternations)
        if r is None:
            raise IsomorphicInputsError("no Spoiler win found; inputs look isomorphic")
        return r

    def alternations_needed(self, rounds: int, upto: int = 1) -> int | None:
        """Least budget k <= ``upto`` with a win in ``rounds``; None if above."""
        for k in range(upto + 1):
            if self.wins((), rounds, None, k):
                return k
        return None

    # ------------------------------------------------------------ formulas

    def formula(self, rounds: int, alternations: int | None = UNLIMITED) -> Formula:
        if not self.wins((), rounds, None, alternations):
            raise BudgetError(f"Spoiler cannot win within {rounds} rounds and "
                              f"{'unlimited' if alternations is None else alternations} alternations")
        return self._formula((), rounds, None, alternations)

    def _dead_literal(self, pairs: Sequence[Pair]) -> Formula:
        """An atom or negated atom true on the G side and false on the H side,
        using the last pair against an earlier one (variables are 1-based)."""
        g, h = self.graphs
        m = len(pairs)
        a, b = pairs[-1]
        for i, (c, d) in enumerate(pairs[:-1], start=1):
            if (a == c) != (b == d):
                return Eq(m, i) if a == c else Not(Eq(m, i))
            if g.has_edge(a, c) != h.has_edge(b, d):
                return Adj(m, i) if g.has_edge(a, c) else Not(Adj(m, i))
        raise AssertionError("configuration is alive")

    def _formula(self, pairs: tuple[Pair, ...], rounds: int, side_last, alt) -> Formula:
        move = self.winning_move(pairs, rounds, side_last, alt)
        if move is None:
            raise AssertionError("winning_move disagrees with wins")
        side, x = move
        nalt = self._after(side, side_last, alt)
        var = len(pairs) + 1
        other = 1 - side
        legal = dict(self.moves(pairs, side))[x]
        legal_set = set(legal)
        parts: list[Formula] = []
        seen: set[Formula] = set()
        rep_of = self._class_of[other]
        legal_classes = {rep_of[y] for y in legal}
        for y in range(self.orders[other]):
            new = pairs + (self._pair(side, x, y),)
            if is_alive(*self.graphs, new):
                if y not in legal_set:
                    # Same orbit as a representative that was searched.
                    if rep_of[y] in legal_classes:
                        continue
                    raise AssertionError("alive reply missing from representatives")
                sub = self._formula(new, rounds - 1, side, nalt)
            else:
                sub = self._dead_literal(new)
            if sub not in seen:
                seen.add(sub)
                parts.append(sub)
        if side == G_SIDE:
            body = parts[0] if len(parts) == 1 else And(tuple(parts))
            return Exists(var, body)
        body = parts[0] if len(parts) == 1 else Or(tuple(parts))
        return Forall(var, body)

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def stats(self) -> dict:
        return {"nodes": self.nodes, "memo": self.memo_size}

    # ------------------------------------------------------- pebble game

    def pebble_game_spoiler_wins(self, pebbles: int) -> bool:
        """Greatest-fixpoint solution of the reusable ``pebbles``-pebble game
        with unbounded rounds."""
        configs: dict[tuple[Pair, ...], int] = {(): 0}
        order = [()]
        i = 0
        while i < len(order):
            cfg = order[i]
            i += 1
            if len(cfg) >= pebbles:
                continue
            for side in (G_SIDE, H_SIDE):
                for x, replies in self.moves(cfg, side):
                    for y in replies:
                        new = self.canon(cfg + (self._pair(side, x, y),))
                        if new not in configs:
                            configs[new] = len(order)
                            order.append(new)

        move_table: list[list[tuple[int, ...]]] = []
        for cfg in order:
            bases = [cfg] if len(cfg) < pebbles else \
                {self.canon(cfg[:j] + cfg[j + 1:]) for j in range(len(cfg))}
            moves = set()
            for base in bases:
                for side in (G_SIDE, H_SIDE):
                    for x, replies in self.moves(base, side):
                        succ = tuple(sorted({configs[self.canon(base + (self._pair(side, x, y),))]
                                             for y in replies}))
                        moves.add(succ)
            move_table.append(sorted(moves, key=len))

        alive = [True] * len(order)
        changed = True
        while changed and alive[0]:
            changed = False
            for idx in range(len(order) - 1, -1, -1):
                if not alive[idx]:
                    continue
                for succ in move_table[idx]:
                    if not any(alive[s] for s in succ):
                        alive[idx] = False
                        changed = True
                        break
            self.nodes += len(order)
        return not alive[0]

    def pebble_number(self) -> int:
        for l in range(1, self.round_cap() + 1):
            if self.pebble_game_spoiler_wins(l):
                return l
        raise IsomorphicInputsError("no pebble count wins; inputs look isomorphic")


# ------------------------------------------------------------ module API

def spoiler_wins(g: Graph, h: Graph, cfg: GameConfig, rounds: int) -> bool:
    if not is_alive(g, h, cfg.pairs):
        return True
    solver = GameSolver(g, h)
    pairs = tuple(sorted(set(cfg.pairs)))
    return solver.wins(solver.canon(pairs), rounds, cfg.side_last, cfg.alternations_left)


def _same_order_bound(g: Graph, h: Graph, rank: int, alternations: int | None) -> None:
    if g.n != h.n:
        return
    if alternations is None or alternations >= 1:
        limit = (g.n + 3) // 2
    else:
        limit = (g.n + 5) // 2
    if rank > limit:
        raise BoundViolation(f"rank {rank} exceeds the same-order bound {limit}")


def rank_Dk(g: Graph, h: Graph, k: int | None, *, formula: bool = False,
            resolve_alternations: bool = True, check: bool = True,
            solver: GameSolver | None = None) -> SolveResult:
    """Least round count Spoiler needs with at most ``k`` alternations
    (``None`` for unlimited)."""
    if check:
        _check_non_isomorphic(g, h)
    solver = solver or GameSolver(g, h)
    r = solver.rank(k)
    _same_order_bound(g, h, r, k)
    used = None
    if resolve_alternations:
        upto = 1 if k is None else min(k, 1)
        used = solver.alternations_needed(r, upto)
    f = solver.formula(r, k) if formula else None
    return SolveResult(r, used, f, solver.stats())


def rank_D(g: Graph, h: Graph, **kwargs) -> SolveResult:
    return rank_Dk(g, h, UNLIMITED, **kwargs)


def pebble_V(g: Graph, h: Graph, check: bool = True) -> int:
    if check:
        _check_non_isomorphic(g, h)
    return GameSolver(g, h).pebble_number()


def identification_rank(g: Graph) -> int:
    """Max rank over all non-isomorphic graphs of the same order (order <= 6)."""
    from .catalog import all_graphs, canonical_code

    if g.n > 6:
        raise ValueError("identification rank is computed exhaustively only up to order 6")
    code = canonical_code(g)
    best = 0
    for h in all_graphs(g.n):
        if canonical_code(h) == code:
            continue
        best = max(best, rank_D(g, h, check=False, resolve_alternations=False).rank)
    return best


def extract_formula(g: Graph, h: Graph, rounds: int,
                    alternations: int | None = UNLIMITED) -> Formula:
    """NNF sentence true on ``g``, false on ``h``, of rank <= ``rounds``."""
    return GameSolver(g, h).formula(rounds, alternations)


# ------------------------------------------------------------- oracles

ReplyOracle = Callable[[Sequence[Pair], Sequence[int], int, int], int]


def _state(pairs: Sequence[Pair], sides: Sequence[int], budget: int | None):
    side_last = sides[-1] if sides else None
    alt = budget
    if budget is not None:
        switches = sum(1 for a, b in zip(sides, sides[1:]) if a != b)
        alt = budget - switches
    return side_last, alt


class OptimalDuplicator:
    """Replies that maximize how many further rounds Spoiler needs.

    ``alternations`` is the Spoiler budget the survival depth is measured
    against (``None`` for unlimited). Ties go to the lowest vertex.
    """

    def __init__(self, g: Graph, h: Graph, rounds: int | None = None,
                 alternations: int | None = UNLIMITED):
        self.solver = GameSolver(g, h)
        self.cap = rounds if rounds is not None else self.solver.round_cap()
        self.alternations = alternations

    def __call__(self, pairs: Sequence[Pair], sides: Sequence[int], side: int, vertex: int) -> int:
        solver = self.solver
        other = 1 - side
        pairs = tuple(pairs)
        for a, b in pairs:
            if (a, b)[side] == vertex:
                return (a, b)[other]
        side_last, alt = _state(pairs, sides, self.alternations)
        nalt = solver._after(side, side_last, alt)
        taken = {pair[other] for pair in pairs}
        best, best_score = None, -1
        for y in range(solver.orders[other]):
            if y in taken:
                # reusing a pebbled vertex against a fresh one loses at once
                if best_score < 0:
                    best, best_score = y, 0
                continue
            new = pairs + (solver._pair(side, vertex, y),)
            need = solver.rounds_needed(new, side, nalt, cap=self.cap)
            score = self.cap + 1 if need is None else need
            if score > best_score:
                best, best_score = y, score
        return best


class RandomDuplicator:
    """Uniformly random replies over all vertices of the other graph."""

    def __init__(self, g: Graph, h: Graph, seed: int = 0):
        self.orders = (g.n, h.n)
        self.rng = random.Random(seed)

    def __call__(self, pairs, sides, side, vertex) -> int:
        return self.rng.randrange(self.orders[1 - side])


class IsomorphismDuplicator:
    """Plays the image under a fixed isomorphism from g to h."""

    def __init__(self, mapping: Sequence[int]):
        self.forward = list(mapping)
        self.backward = [0] * len(mapping)
        for u, v in enumerate(mapping):
            self.backward[v] = u

    def __call__(self, pairs, sides, side, vertex) -> int:
        return self.forward[vertex] if side == G_SIDE else self.backward[vertex]
