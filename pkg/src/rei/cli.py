"""``rei`` command line: build, query, bench, tune, stats."""

import argparse
import logging
import sys
import time

from . import bench, stats, tuner
from .corpus import Corpus, Workload, load_corpus, load_queries
from .index import BitVectorIndex, corpus_digest, deserialize, index_size_bytes, serialize
from .query import query_indexed
from .selection import STRATEGIES, select_grams

logger = logging.getLogger("rei")


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def int_list(text):
    return [positive_int(part) for part in text.split(",") if part]


def str_list(text):
    return [part for part in text.split(",") if part]


def _err(msg):
    print(msg, file=sys.stderr)


def cmd_build(args):
    if args.strategy != "english" and not args.queries:
        raise SystemExit(f"error: --strategy {args.strategy} requires --queries")
    corpus = load_corpus(args.logs, args.m)
    queries = load_queries(args.queries) if args.queries else None
    t0 = time.perf_counter()
    dictionary = select_grams(
        args.strategy, args.n, args.k, queries=queries, lines=corpus,
        pairwise=args.pairwise, ranking=args.english_ranking,
    )
    t1 = time.perf_counter()
    index = BitVectorIndex(n=args.n, k=len(dictionary), m=args.m, dictionary=dictionary).fit(corpus)
    t2 = time.perf_counter()
    serialize(index, args.out)
    _err(f"selected {len(dictionary)} grams in {t1 - t0:.4f}s")
    _err(f"built {index.num_groups_} vectors in {t2 - t1:.4f}s")
    _err(f"index size {index_size_bytes(len(corpus), len(dictionary), args.m)} bytes -> {args.out}")
    return 0


def cmd_query(args):
    index = deserialize(args.index)
    corpus = load_corpus(args.logs, index.m)
    if len(corpus) != index.n_lines_ or corpus_digest(corpus.texts) != index.corpus_digest_:
        raise ValueError(f"{args.logs} is not the corpus this index was built from")
    result = query_indexed(index, corpus, args.pattern)
    out = sys.stdout
    for i in result.ids:
        out.write(f"{i}\n")
    total = len(corpus)
    pct = 100.0 * result.lines_scanned / total if total else 100.0
    _err(
        f"groups passed {result.groups_passed}/{index.num_groups_}, "
        f"lines scanned {result.lines_scanned}/{total} ({pct:.2f}%), matches {result.lines_matched}"
    )
    return 0


def cmd_bench(args):
    corpus = Corpus(load_corpus(args.logs).texts)
    workload = Workload(corpus, tuple(load_queries(args.queries)))
    result = bench.sweep(
        workload, ns=args.n, ks=args.k, ms=args.m, kinds=args.kinds, runs=args.runs,
        strategy=args.strategy, ranking=args.english_ranking, parallel=args.parallel,
    )
    if args.parallel:
        _err("note: queries evaluated in parallel")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            bench.write_csv(result.records, fh)
    else:
        bench.write_csv(result.records, sys.stdout)
    for key, exc in result.failures:
        _err(f"configuration {key} failed: {exc}")
    return 1 if result.failures else 0


def cmd_tune(args):
    corpus = load_corpus(args.logs)
    queries = load_queries(args.queries)
    model = tuner.build_model(queries, corpus, args.n, args.granularities, args.sample_blocks)
    budget = tuner.parse_budget(args.budget)
    best, rows = tuner.tune(model, budget, k_max=args.k_max)
    print(tuner.format_table(rows))
    if model.sample_lines is not None:
        _err(f"block statistics sampled from the first {model.sample_lines} lines")
    _err(f"best: k={best.k} m={best.m} eta={best.eta:.6g}")
    return 0


def cmd_stats(args):
    printed = False

    def emit(name, value):
        nonlocal printed
        print(f"{name}\t{value:.{args.precision}f}")
        printed = True

    if args.zipf_d is not None or args.zipf_a is not None:
        emit("zipf_anomaly_probability", stats.zipf_trigram_anomaly_probability(args.zipf_d or 26, args.zipf_a if args.zipf_a is not None else 1.1))
    corpus = load_corpus(args.logs) if args.logs else None
    queries = load_queries(args.queries) if args.queries else None
    for gram in args.selectivity or ():
        if corpus is None:
            raise SystemExit("error: --selectivity requires --logs")
        emit(f"selectivity[{gram}]", stats.selectivity(gram, corpus))
    if args.intersection:
        a, b = args.intersection
        sel_a = select_grams(a, args.n, args.k, queries=queries, lines=corpus, ranking=args.english_ranking)
        sel_b = select_grams(b, args.n, args.k, queries=queries, lines=corpus, ranking=args.english_ranking)
        size = min(len(sel_a), len(sel_b))
        emit(f"intersection[{a},{b}]", stats.intersection_percentage(sel_a.grams[:size], sel_b.grams[:size]))
    if args.overlap:
        bi = select_grams(args.overlap, 2, args.k, queries=queries, lines=corpus, ranking=args.english_ranking)
        tri = select_grams(args.overlap, 3, args.k, queries=queries, lines=corpus, ranking=args.english_ranking)
        emit(f"bigram_in_trigram[{args.overlap}]", stats.bigram_in_trigram_overlap(bi, tri))
    if not printed:
        raise SystemExit("error: no statistic requested")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="rei", description="Bit-vector n-gram index for regex search over logs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="select grams and write an index file")
    p.add_argument("--logs", required=True)
    p.add_argument("--queries")
    p.add_argument("--english-ranking")
    p.add_argument("--n", type=positive_int, default=2)
    p.add_argument("--k", type=positive_int, default=64)
    p.add_argument("--m", type=positive_int, default=1)
    p.add_argument("--strategy", choices=STRATEGIES, default="freq")
    p.add_argument("--pairwise", action="store_true", help="incr_bene conditions on the previous pick only")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="print ids of lines matching a pattern")
    p.add_argument("--index", required=True)
    p.add_argument("--logs", required=True)
    p.add_argument("pattern")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="sweep configurations and write CSV")
    p.add_argument("--logs", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--english-ranking")
    p.add_argument("--kinds", type=str_list, default=["bitvector"])
    p.add_argument("--n", type=int_list, default=[2])
    p.add_argument("--k", type=int_list, default=[64])
    p.add_argument("--m", type=int_list, default=[1])
    p.add_argument("--strategy", choices=STRATEGIES, default="freq")
    p.add_argument("--runs", type=positive_int, default=10)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("tune", help="suggest (k, m) under a size budget")
    p.add_argument("--logs", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--budget", required=True, help="bits, or bytes with B/KB/MB/GB suffix")
    p.add_argument("--n", type=positive_int, default=2)
    p.add_argument("--granularities", type=int_list, default=list(tuner.DEFAULT_GRANULARITIES))
    p.add_argument("--k-max", type=positive_int)
    p.add_argument("--sample-blocks", type=positive_int)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("stats", help="gram and selection statistics")
    p.add_argument("--logs")
    p.add_argument("--queries")
    p.add_argument("--english-ranking")
    p.add_argument("--zipf-d", type=positive_int)
    p.add_argument("--zipf-a", type=float)
    p.add_argument("--selectivity", action="append", metavar="GRAM")
    p.add_argument("--intersection", nargs=2, metavar=("STRATEGY_A", "STRATEGY_B"))
    p.add_argument("--overlap", metavar="STRATEGY", help="bigram-in-trigram overlap for a strategy")
    p.add_argument("--n", type=positive_int, default=2)
    p.add_argument("--k", type=positive_int, default=64)
    p.add_argument("--precision", type=int, default=4)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    for name in ("kinds",):
        for kind in getattr(args, name, None) or ():
            if kind not in bench.KINDS:
                parser.error(f"unknown index kind {kind!r}")
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        _err(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
