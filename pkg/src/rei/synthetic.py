"""Generated log corpora for smoke benchmarks.

The haystack is lowercase service chatter. Each query looks for an
uppercase error token that is planted in a small number of lines, so the
workload is selective by construction.
"""

import random
import string

_LEVELS = ("info", "debug", "warn", "trace")
_COMPONENTS = ("scheduler", "gateway", "storage", "auth", "indexer", "replica", "cache", "billing")
_WORDS = (
    "request", "completed", "started", "connection", "opened", "closed", "user", "session",
    "token", "refreshed", "queue", "depth", "latency", "bytes", "written", "read", "retry",
    "timeout", "worker", "heartbeat", "received", "sent", "shard", "leader", "elected",
    "snapshot", "flushed", "compaction", "segment", "merged", "client", "server", "config",
    "reloaded", "metrics", "exported", "lease", "renewed", "checkpoint", "applied",
)


def _haystack_line(rng, i):
    ts = f"2024-{1 + i % 12:02d}-{1 + i % 28:02d}t{i % 24:02d}:{i % 60:02d}:{(i * 7) % 60:02d}"
    words = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(5, 10)))
    return (
        f"{ts} {rng.choice(_LEVELS)} {rng.choice(_COMPONENTS)}[{rng.randint(100, 9999)}]: "
        f"{words} id={rng.randint(0, 10**6)} took={rng.randint(1, 999)}ms"
    )


def needle_workload(num_lines=1_000_000, num_queries=20, needle_fraction=0.001, seed=0):
    """Return ``(lines, queries)`` as byte lines and regex strings.

    At most ``needle_fraction`` of the lines carry a planted match, split
    evenly across the queries.
    """
    rng = random.Random(seed)
    tokens = []
    while len(tokens) < num_queries:
        token = "ERR_" + "".join(rng.choice(string.ascii_uppercase) for _ in range(6))
        if token not in tokens:
            tokens.append(token)
    queries = [rf"{t} on node-\d+ after \d+ms" for t in tokens]
    lines = [_haystack_line(rng, i) for i in range(num_lines)]
    per_query = int(num_lines * needle_fraction) // max(1, num_queries)
    slots = rng.sample(range(num_lines), per_query * num_queries)
    for j, slot in enumerate(slots):
        token = tokens[j % num_queries]
        lines[slot] = f"{lines[slot]} {token} on node-{rng.randint(1, 64)} after {rng.randint(1, 5000)}ms"
    return [line.encode() for line in lines], queries
