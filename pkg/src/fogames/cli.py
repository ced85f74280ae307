"""Command-line front end. Every command prints line-delimited JSON reports.

Exit codes: 0 success, 1 bound violation found by ``sweep --bound-check``,
2 isomorphic inputs where a distinction was required, 3 bad input,
4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .catalog import MAX_CATALOGUE_ORDER, all_graphs, load_graph
from .graph import Graph, GraphFormatError, is_isomorphic, write_graph6

EXIT_OK, EXIT_VIOLATION, EXIT_ISOMORPHIC, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3, 4
JOBS_ENV = "FOGAMES_JOBS"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def emit(obj: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(obj) + "\n")
    out.flush()


def report(cmd: str, inputs, results: dict, bounds=(), stats=None, seed=None) -> dict:
    rep = {"cmd": cmd, "inputs": [write_graph6(g) if isinstance(g, Graph) else g for g in inputs],
           "results": results, "bounds": list(bounds), "stats": stats or {}}
    if seed is not None:
        rep["seed"] = seed
    return rep


def bound(name: str, value: int, limit: int) -> dict:
    return {"name": name, "value": value, "limit": limit, "pass": value <= limit}


def _graph(spec: str) -> Graph:
    try:
        return load_graph(spec)
    except (GraphFormatError, OSError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"cannot read graph {spec!r}: {exc}") from None


def _alt(text: str) -> int | None:
    return None if text == "inf" else int(text)


def _rank_label(k: int | None) -> str:
    return "D" if k is None else f"D{k}"


ISO_CHECK_MAX_ORDER = 12  # backtracking search is exponential on CFI-like inputs


def _require_distinct(g: Graph, h: Graph) -> None:
    if g.n == h.n and g.n <= ISO_CHECK_MAX_ORDER and is_isomorphic(g, h):
        raise CliError(EXIT_ISOMORPHIC, "inputs are isomorphic")


def _rank_bound(n: int, k: int | None) -> tuple[str, int]:
    if k == 0:
        return "same-order alternation-free rank", (n + 5) // 2
    return "same-order rank", (n + 3) // 2


# ---------------------------------------------------------------- rank

def cmd_rank(args) -> int:
    from .logic import to_text
    from .solver import GameSolver

    g, h = _graph(args.g), _graph(args.h)
    _require_distinct(g, h)
    k = _alt(args.alt)
    t0 = time.perf_counter()
    solver = GameSolver(g, h)
    r = solver.rank(k)
    label = _rank_label(k)
    results: dict = {label: r, "alternations_used": solver.alternations_needed(r, 1 if k is None else min(k, 1))}
    if args.pebbles:
        results["V"] = solver.pebble_number()
    if args.formula:
        results["formula"] = to_text(solver.formula(r, k))
    bounds = []
    if g.n == h.n:
        name, limit = _rank_bound(g.n, k)
        bounds.append(bound(name, r, limit))
        results["bound"], results["pass"] = limit, r <= limit
    stats = dict(solver.stats(), millis=round((time.perf_counter() - t0) * 1000, 3))
    emit(report("rank", [g, h], results, bounds, stats))
    return EXIT_OK


# --------------------------------------------------------------- sweep

def _sweep_one(task):
    n, i, j, k = task
    from .solver import GameSolver

    graphs = all_graphs(n)
    solver = GameSolver(graphs[i], graphs[j])
    return i, j, solver.rank(k), solver.stats()


def cmd_sweep(args) -> int:
    n = args.n
    if n < 2:
        raise CliError(EXIT_INPUT, "sweep needs order at least 2")
    if n > MAX_CATALOGUE_ORDER:
        raise CliError(EXIT_CAP, f"sweep supports orders up to {MAX_CATALOGUE_ORDER}")
    k = _alt(args.alt)
    label = _rank_label(k)
    name, limit = _rank_bound(n, k)
    graphs = all_graphs(n)
    tasks = [(n, i, j, k) for i in range(len(graphs)) for j in range(i + 1, len(graphs))]
    jobs = args.jobs if args.jobs is not None else int(os.environ.get(JOBS_ENV, "1"))
    t0 = time.perf_counter()
    if jobs > 1:
        import multiprocessing as mp

        with mp.Pool(jobs) as pool:
            results = list(pool.imap(_sweep_one, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
    else:
        results = [_sweep_one(t) for t in tasks]
    best, argmax, violations, ranks = 0, None, 0, []
    nodes = 0
    for i, j, r, st in results:
        ranks.append(r)
        nodes += st["nodes"]
        bounds = [bound(name, r, limit)] if args.bound_check else []
        if r > limit:
            violations += 1
        if not args.summary_only:
            emit(report("sweep", [graphs[i], graphs[j]], {label: r}, bounds,
                        {"nodes": st["nodes"], "memo": st["memo"]}))
        if r > best:
            best, argmax = r, (graphs[i], graphs[j])
    summary = {"order": n, "pairs": len(results), f"max_{label}": best,
               "argmax": [write_graph6(x) for x in argmax] if argmax else None,
               "violations": violations,
               "rank_counts": {str(r): ranks.count(r) for r in sorted(set(ranks))}}
    if args.figure:
        from .plotting import sweep_figure

        summary["figure"] = str(sweep_figure(ranks, limit, n, args.figure, label))
    millis = round((time.perf_counter() - t0) * 1000, 3)
    emit(report("sweep-summary", [str(n)], summary, [dict(bound(name, best, limit),
                                                          violations=violations)],
                {"nodes": nodes, "millis": millis, "jobs": jobs}))
    return EXIT_VIOLATION if args.bound_check and violations else EXIT_OK


# ------------------------------------------------------------ classify

def cmd_classify(args) -> int:
    from .similarity import classify, defining_rank_report, similarity_partition

    g = _graph(args.g)
    if g.n == 0:
        raise CliError(EXIT_INPUT, "classification needs at least one vertex")
    part = similarity_partition(g)
    cls = classify(g)
    results = dict(cls.to_json())
    results["class_sizes"] = sorted((len(c) for c in part.classes), reverse=True)
    rank = defining_rank_report(g)
    results.update(rank.to_json())
    bounds = [] if rank.exact is not None else [bound("defining rank upper end", rank.upper, (g.n + 5) // 2)]
    emit(report("classify", [g], results, bounds))
    return EXIT_OK


# ------------------------------------------------------------------ wl

def cmd_wl(args) -> int:
    from .wl import (DimensionCapExceeded, OrderMismatchError, wl_canonical_form,
                     wl_iso_test, wl_optimal_dimension, wl_stabilize)

    g = _graph(args.g)
    h = _graph(args.h) if args.h else None
    t0 = time.perf_counter()
    if args.canon:
        certs = [wl_canonical_form(x, args.k, args.variant) for x in ([g] if h is None else [g, h])]
        results = {"certificates": [{"digest": c.digest(), "steps": c.steps,
                                     "stable_from": c.stable_from, "diagonal": list(c.diagonal)}
                                    for c in certs]}
        if h is not None:
            results["identical"] = certs[0].to_bytes() == certs[1].to_bytes()
        emit(report("wl", [x for x in (g, h) if x is not None], results,
                    stats={"millis": round((time.perf_counter() - t0) * 1000, 3)}))
        return EXIT_OK
    if h is None:
        raise CliError(EXIT_INPUT, "wl needs two graphs unless --canon is given")
    try:
        if args.optdim:
            _require_distinct(g, h)
            dim = wl_optimal_dimension(g, h, args.variant, check=False)
            results = {"optimal_dimension": dim, "variant": args.variant}
            bounds = [bound("dimension cap", dim, (g.n + 1) // 2 + 1)]
            if args.seed:
                from .cfi import separator_size

                s, _ = separator_size(_graph(args.seed))
                results["separator_floor"] = s
                results["at_least_separator"] = dim >= s
        else:
            st = wl_stabilize(g, h, args.k, args.variant)
            decision = wl_iso_test(g, h, args.k, args.variant)
            results = {"decision": decision, "k": args.k, "variant": args.variant,
                       "R": st.R, "steps": st.steps}
            bounds = [bound("stabilization steps", st.R, g.n ** args.k + h.n ** args.k - 1)]
    except OrderMismatchError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    except DimensionCapExceeded as exc:
        raise CliError(EXIT_CAP, str(exc)) from None
    emit(report("wl", [g, h], results, bounds,
                {"millis": round((time.perf_counter() - t0) * 1000, 3)}))
    return EXIT_OK


# ----------------------------------------------------------------- cfi

def cmd_cfi(args) -> int:
    from .cfi import (MAX_BRUTE_FORCE_ORDER, InvalidSeedError, cfi_pair,
                      lower_bound_certificate, random_regular)
    from .graph import is_connected

    seed_value = None
    if args.random:
        d, m, seed_value = args.random
        try:
            seed = random_regular(d, m, seed_value)
        except (ValueError, RuntimeError) as exc:
            raise CliError(EXIT_INPUT, str(exc)) from None
    elif args.seed_graph:
        seed = _graph(args.seed_graph)
    else:
        raise CliError(EXIT_INPUT, "give a seed graph or --random d m seed")
    t0 = time.perf_counter()
    try:
        inst = cfi_pair(seed)
    except InvalidSeedError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    g, g2 = inst.pair
    results = {"seed": write_graph6(seed), "order": g.n, "maxdeg": g.max_degree(),
               "connected": is_connected(g) and is_connected(g2), "noniso": True,
               "certified_by": inst.certified_by, "twist": list(inst.twist),
               "graphs": [write_graph6(g), write_graph6(g2)]}
    if args.out:
        prefix = Path(args.out)
        g6_path = prefix.with_suffix(".g6")
        prov_path = prefix.with_suffix(".provenance.json")
        g6_path.write_text(write_graph6(g) + "\n" + write_graph6(g2) + "\n")
        prov_path.write_text(json.dumps({str(i): lab for i, lab in enumerate(inst.provenance)},
                                        indent=1) + "\n")
        results["files"] = [str(g6_path), str(prov_path)]
    if args.certify:
        if seed.n > MAX_BRUTE_FORCE_ORDER:
            raise CliError(EXIT_CAP, f"certification brute force is limited to order {MAX_BRUTE_FORCE_ORDER}")
        results["expansion"] = lower_bound_certificate(seed).to_json()
    emit(report("cfi", [seed], results, stats={"millis": round((time.perf_counter() - t0) * 1000, 3)},
                seed=seed_value))
    return EXIT_OK


# ---------------------------------------------------------------- play

def _ask(prompt: str, parse, stream_in=None):
    """Prompt until ``parse`` accepts the line; EOF raises EOFError."""
    while True:
        sys.stderr.write(prompt)
        sys.stderr.flush()
        line = stream_in.readline() if stream_in is not None else input()
        if stream_in is not None and line == "":
            raise EOFError
        value = parse(line.strip())
        if value is not None:
            return value
        sys.stderr.write("illegal input, try again\n")


def cmd_play(args) -> int:
    from .solver import (G_SIDE, SIDE_NAMES, GameSolver, IsomorphicInputsError,
                         OptimalDuplicator, is_alive)
    from .strategy import (CLAIM_WIN, ExceptionShapeError, StrategyError, make_plan,
                           spoiler_next_move)

    g, h = _graph(args.g), _graph(args.h)
    graphs = (g, h)
    rounds = args.rounds
    if args.human == "spoiler" and args.engine != "optimal":
        raise CliError(EXIT_INPUT, "only the optimal engine can play Duplicator")
    pairs: list[tuple[int, int]] = []
    sides: list[int] = []
    history = []
    entries = []
    aborted = False
    winner = None

    def parse_move(text: str):
        parts = text.replace(",", " ").split()
        if len(parts) != 2 or parts[0].upper() not in SIDE_NAMES or not parts[1].isdigit():
            return None
        side, v = SIDE_NAMES.index(parts[0].upper()), int(parts[1])
        return (side, v) if v < graphs[side].n else None

    def parse_reply(n: int):
        def parse(text: str):
            return int(text) if text.isdigit() and int(text) < n else None
        return parse

    solver = GameSolver(g, h)
    oracle = OptimalDuplicator(g, h) if args.human == "spoiler" else None
    plan = None
    if args.human == "duplicator" and args.engine == "constructive":
        try:
            plan = make_plan(g, h)
        except ExceptionShapeError as exc:
            raise CliError(EXIT_INPUT, str(exc)) from None

    def fresh_move():
        # no winning line: keep probing with an unpebbled vertex of g
        used = {a for a, _ in pairs}
        return G_SIDE, next((v for v in range(g.n) if v not in used), 0)

    def engine_move():
        if plan is not None:
            try:
                return spoiler_next_move(plan, history)
            except (IsomorphicInputsError, StrategyError, ValueError):
                return fresh_move()
        if not is_alive(g, h, pairs):
            return CLAIM_WIN
        need = solver.rounds_needed(tuple(pairs), sides[-1] if sides else None, None,
                                    cap=rounds - len(pairs))
        move = solver.winning_move(tuple(pairs), need) if need else None
        return move or fresh_move()

    try:
        for rnd in range(1, rounds + 1):
            if args.human == "spoiler":
                side, v = _ask(f"round {rnd}: your move (G v | H v): ", parse_move)
                reply = oracle(tuple(pairs), tuple(sides), side, v)
            else:
                move = engine_move()
                if move == CLAIM_WIN:
                    break
                side, v = move
                other = graphs[1 - side]
                reply = _ask(f"round {rnd}: Spoiler picks {SIDE_NAMES[side]} {v}; "
                             f"your reply in {SIDE_NAMES[1 - side]} (0..{other.n - 1}): ",
                             parse_reply(other.n))
            history.append(((side, v), reply))
            pairs.append((v, reply) if side == G_SIDE else (reply, v))
            sides.append(side)
            alive = is_alive(g, h, pairs)
            entries.append({"round": rnd, "side": SIDE_NAMES[side], "vertex": v,
                            "reply": reply, "alive": alive})
            sys.stderr.write(f"round {rnd}: {'Duplicator holds' if alive else 'Spoiler wins'}\n")
            if not alive:
                winner = "spoiler"
                break
    except EOFError:
        aborted = True
    if winner is None and not aborted:
        winner = "duplicator"
    transcript = {"winner": winner, "rounds": len(entries), "entries": entries,
                  "aborted": aborted, "human": args.human, "engine": args.engine}
    emit(report("play", [g, h], transcript))
    return EXIT_OK


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fogames", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("rank", help="round, alternation and pebble numbers of a pair")
    r.add_argument("g")
    r.add_argument("h")
    r.add_argument("--alt", choices=["0", "1", "inf"], default="inf")
    r.add_argument("--pebbles", action="store_true")
    r.add_argument("--formula", action="store_true")
    r.set_defaults(func=cmd_rank)

    s = sub.add_parser("sweep", help="all pairs of one order")
    s.add_argument("n", type=int)
    s.add_argument("--alt", choices=["0", "1", "inf"], default="inf")
    s.add_argument("--bound-check", action="store_true")
    s.add_argument("--jobs", type=int, default=None,
                   help=f"worker processes (default ${JOBS_ENV} or 1)")
    s.add_argument("--figure", help="write a PNG histogram of ranks here")
    s.add_argument("--summary-only", action="store_true")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("classify", help="similarity classes and defining rank")
    c.add_argument("g")
    c.set_defaults(func=cmd_classify)

    w = sub.add_parser("wl", help="Weisfeiler-Lehman test, dimension search or canon")
    w.add_argument("g")
    w.add_argument("h", nargs="?")
    w.add_argument("--k", type=int, default=2)
    w.add_argument("--variant", choices=["set", "multiset"], default="set")
    w.add_argument("--canon", action="store_true")
    w.add_argument("--optdim", action="store_true")
    w.add_argument("--seed", help="CFI seed graph, to annotate --optdim with its separator size")
    w.set_defaults(func=cmd_wl)

    f = sub.add_parser("cfi", help="build a hard pair from a regular seed")
    f.add_argument("seed_graph", nargs="?")
    f.add_argument("--random", type=int, nargs=3, metavar=("D", "M", "SEED"))
    f.add_argument("--certify", action="store_true")
    f.add_argument("--out", help="path prefix for the .g6 and .provenance.json files")
    f.set_defaults(func=cmd_cfi)

    pl = sub.add_parser("play", help="play one game in the terminal")
    pl.add_argument("g")
    pl.add_argument("h")
    pl.add_argument("--as", dest="human", choices=["spoiler", "duplicator"], default="duplicator")
    pl.add_argument("--engine", choices=["optimal", "constructive"], default="optimal")
    pl.add_argument("--rounds", type=int, default=5)
    pl.set_defaults(func=cmd_play)
    return p


def main(argv=None) -> int:
    from .solver import IsomorphicInputsError

    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"fogames: {exc}\n")
        return exc.code
    except IsomorphicInputsError as exc:
        sys.stderr.write(f"fogames: {exc}\n")
        return EXIT_ISOMORPHIC


if __name__ == "__main__":
    sys.exit(main())
