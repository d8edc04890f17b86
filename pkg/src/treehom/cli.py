"""Command-line front end.

Exit codes: 0 decided/constructed, 1 negative decision (no homomorphism,
not semi-linear, duplicator loss), 2 usage error, 3 size-limit error.
`--json` makes every subcommand emit a single JSON document on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import decision, efgame, randgen, strategy, sweep, tripleu, universal
from .errors import (EmptyStructure, NoHomomorphism, NotExhausted,
                     NotSemilinear, ParseError, SizeLimitExceeded,
                     TreehomError, UnknownLabel)
from .structures import (ConstraintStructure, format_structure, iter_bits,
                         parse_structure, subset_criterion_oracle)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_SIZE = 3


def _load(path: str) -> ConstraintStructure:
    with open(path, encoding="utf-8") as f:
        return parse_structure(f.read())


def _emit(args, doc: dict, human: str) -> None:
    if args.json:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        sys.stdout.write(human)
        if not human.endswith("\n"):
            sys.stdout.write("\n")


def cmd_check(args) -> int:
    s = _load(args.file)
    mode = args.mode
    if mode == "height":
        if args.height is None:
            print("--height is required for mode height", file=sys.stderr)
            return EXIT_USAGE
        ok = decision.decide_tree_height(s, args.height)
        levels = decision.compute_level_sets(s, args.height)
        doc = {"mode": mode, "height": args.height, "accepted": ok,
               "levels": [list(s.labels_of(m)) for m in levels.levels]}
        human = f"{'ACCEPT' if ok else 'REJECT'} height={args.height}\n"
        for i, m in enumerate(levels.levels):
            human += f"  level {i}: {' '.join(s.labels_of(m)) or '-'}\n"
        _emit(args, doc, human)
        return EXIT_OK if ok else EXIT_NEGATIVE
    fp = decision.fixpoint_levels(s)
    doc = {"mode": mode, "accepted": fp.exhausted,
           "stages": {s.labels[i]: st for i, st in sorted(fp.stage.items())}}
    human = f"{'ACCEPT' if fp.exhausted else 'REJECT'} mode={mode}\n"
    if fp.exhausted:
        for i, st in sorted(fp.stage.items(), key=lambda kv: (kv[1], kv[0])):
            human += f"  stage {st}: {s.labels[i]}\n"
    else:
        from .structures import connected_components
        stalled = connected_components(s, fp.residual)[0]
        doc["stalled_component"] = list(s.labels_of(stalled))
        human += ("  stalled component without central point: "
                  + " ".join(s.labels_of(stalled)) + "\n")
    _emit(args, doc, human)
    return EXIT_OK if fp.exhausted else EXIT_NEGATIVE


def cmd_oracle_check(args) -> int:
    s = _load(args.file)
    if args.mode == "height":
        if args.height is None:
            print("--height is required for mode height", file=sys.stderr)
            return EXIT_USAGE
        ok = decision.brute_force_tree_hom_oracle(s, args.height, s.n)
        doc = {"mode": "height", "height": args.height, "accepted": ok,
               "oracle": "bounded-tree backtracking"}
    else:
        ok = subset_criterion_oracle(s)
        doc = {"mode": args.mode, "accepted": ok, "oracle": "subset criterion"}
    _emit(args, doc, f"{'ACCEPT' if ok else 'REJECT'} (oracle)\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_witness(args) -> int:
    s = _load(args.file)
    try:
        tree, mapping = decision.build_witness(s)
    except NoHomomorphism as exc:
        doc = {"accepted": False,
               "stalled_component": list(exc.certificate_labels)}
        _emit(args, doc, "REJECT: stalled component "
              + " ".join(exc.certificate_labels))
        return EXIT_NEGATIVE
    ok = decision.verify_homomorphism(s, tree, mapping)
    doc = {"accepted": True, "verified": ok,
           "tree": {"root": tree.node_names[tree.root],
                    "edges": [[tree.node_names[p], tree.node_names[c]]
                              for c, p in sorted(tree.parent.items())]},
           "mapping": {s.labels[i]: tree.node_names[t]
                       for i, t in sorted(mapping.map.items())}}
    human = "witness tree (parent <- child):\n"
    for c, p in sorted(tree.parent.items()):
        human += f"  {tree.node_names[p]} <- {tree.node_names[c]}\n"
    human += "mapping:\n"
    for i, t in sorted(mapping.map.items()):
        human += f"  {s.labels[i]} -> {tree.node_names[t]}\n"
    human += f"self-verified: {ok}\n"
    _emit(args, doc, human)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_embed(args) -> int:
    s = _load(args.file)
    try:
        emb = universal.embed_universal(s)
    except NotSemilinear as exc:
        _emit(args, {"accepted": False, "reason": str(exc)},
              f"REJECT: {exc}")
        return EXIT_NEGATIVE
    ok = universal.verify_universal_embedding(s, emb)
    text = universal.serialize_embedding(s, emb)
    doc = {"accepted": True, "verified": ok,
           "dyadic_depth_bound": emb.dyadic_depth_bound,
           "words": {s.labels[i]: str(w) for i, w in sorted(emb.phi.items())}}
    _emit(args, doc, text + f"# verified: {ok}\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_gen(args) -> int:
    if args.what == "tripleu":
        named = tripleu.gen_tripleu(tripleu.TripleUSpec(args.n, args.m))
        s = named.structure
    else:
        cfg = tripleu.FamilyConfig(args.kind, tuple(args.sizes), args.mult)
        s = tripleu.gen_family(cfg).structure
    if args.json:
        doc = {"nodes": list(s.labels),
               "lt": sorted(map(list, s.lt_pairs_by_label())),
               "inc": sorted(map(list, s.inc_pairs_by_label()))}
        _emit(args, doc, "")
    else:
        sys.stdout.write(format_structure(s))
    return EXIT_OK


def cmd_game_solve(args) -> int:
    left = _load(args.left)
    right = _load(args.right)
    res = efgame.solve_game(left, right, args.k)
    _emit(args, {"winner": res.winner, "k": args.k},
          f"winner after {args.k} rounds: {res.winner}")
    return EXIT_OK if res.winner == "duplicator" else EXIT_NEGATIVE


def cmd_game_chains(args) -> int:
    lengths = efgame.find_equivalent_chain_lengths(args.k, args.maxlen,
                                                   attached=args.attached)
    _emit(args, {"k": args.k, "maxlen": args.maxlen,
                 "attached": args.attached, "lengths": lengths},
          " ".join(map(str, lengths)))
    return EXIT_OK


def cmd_game_selfplay(args) -> int:
    sizes = tuple(args.sizes)
    ef = tripleu.gen_family(tripleu.FamilyConfig("E", sizes, args.mult))
    uf = tripleu.gen_family(tripleu.FamilyConfig("U", sizes, args.mult))
    ctx = strategy.build_context(ef, uf, rank=args.k)
    if args.exhaustive:
        st = sweep.adversarial_sweep(ctx, args.rounds)
    else:
        st = sweep.random_playouts(ctx, args.rounds, args.games, args.seed)
    doc = {"playouts": st.playouts, "duplicator_wins": st.duplicator_wins,
           "duplicator_losses": st.duplicator_losses,
           "spoiler_stuck": st.spoiler_stuck,
           "fresh_shortages": st.fresh_shortages,
           "invariant_failures": st.invariant_failures[:10]}
    human = (f"playouts={st.playouts} wins={st.duplicator_wins} "
             f"losses={st.duplicator_losses} stuck={st.spoiler_stuck} "
             f"shortages={st.fresh_shortages} "
             f"invariant_failures={len(st.invariant_failures)}")
    _emit(args, doc, human)
    return EXIT_OK if st.clean else EXIT_NEGATIVE


def cmd_oracle_sweep(args) -> int:
    from .decision import fixpoint_levels
    mismatches = 0
    for s in randgen.random_structures(args.seed, args.count, args.nodes):
        if fixpoint_levels(s).exhausted != subset_criterion_oracle(s):
            mismatches += 1
    _emit(args, {"count": args.count, "mismatches": mismatches},
          f"{args.count} structures, {mismatches} mismatches")
    return EXIT_OK if mismatches == 0 else EXIT_NEGATIVE


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port,
                log_level="warning")
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import family_separation_report
    paths = family_separation_report(args.anchor, args.sizes, args.mult,
                                     args.out)
    _emit(args, {"written": paths}, "wrote " + " ".join(paths))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="treehom",
        description="homomorphisms into tree-like orders, and the game playground")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--json", action="store_true",
                       help="emit one JSON document")
        p.set_defaults(fn=fn)
        return p

    p = add("check", cmd_check, help="decide homomorphism existence")
    p.add_argument("--mode", choices=["semilinear", "ordinal-tree", "tree",
                                      "height"], default="semilinear")
    p.add_argument("--height", type=int)
    p.add_argument("file")

    p = add("oracle-check", cmd_oracle_check,
            help="brute-force the same decisions")
    p.add_argument("--mode", choices=["semilinear", "ordinal-tree", "tree",
                                      "height"], default="semilinear")
    p.add_argument("--height", type=int)
    p.add_argument("file")

    p = add("witness", cmd_witness, help="construct tree and mapping")
    p.add_argument("file")

    p = add("embed", cmd_embed, help="embed a semi-linear order into words")
    p.add_argument("file")

    pg = sub.add_parser("gen", help="generate structures")
    gsub = pg.add_subparsers(dest="what", required=True)
    p = gsub.add_parser("tripleu")
    p.add_argument("--json", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(fn=cmd_gen)
    p = gsub.add_parser("family")
    p.add_argument("--json", action="store_true")
    p.add_argument("--kind", choices=["E", "U"], required=True)
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--mult", type=int, default=1)
    p.set_defaults(fn=cmd_gen)

    pgame = sub.add_parser("game", help="game solver and strategy playouts")
    gsub = pgame.add_subparsers(dest="what", required=True)
    p = gsub.add_parser("solve")
    p.add_argument("--json", action="store_true")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=cmd_game_solve)
    p = gsub.add_parser("chains")
    p.add_argument("--json", action="store_true")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True)
    p.add_argument("--attached", action="store_true",
                   help="compare chains with their attachment point marked")
    p.set_defaults(fn=cmd_game_chains)
    p = gsub.add_parser("selfplay")
    p.add_argument("--json", action="store_true")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--mult", type=int, default=2)
    p.add_argument("--games", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(fn=cmd_game_selfplay)

    p = add("oracle-sweep", cmd_oracle_sweep,
            help="random cross-validation of fixpoint vs subset oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--nodes", type=int, default=8)

    p = add("serve", cmd_serve, help="run the game HTTP API")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")

    p = add("report", cmd_report,
            help="render the family separation diagnostic (CSV + PNG)")
    p.add_argument("--anchor", type=int, default=2)
    p.add_argument("--sizes", type=int, nargs="+", default=[3, 5, 7, 9])
    p.add_argument("--mult", type=int, default=1)
    p.add_argument("--out", default="report")

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SizeLimitExceeded as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ParseError, EmptyStructure, UnknownLabel, NotExhausted,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TreehomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
