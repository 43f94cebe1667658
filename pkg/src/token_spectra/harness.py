"""Corpus sweeps of the algebraic-connectivity conjecture.

A sweep walks a corpus in a fixed order, cuts it into fixed-size chunks and
evaluates each chunk with the batched engine, optionally in a worker pool.
Results are merged in corpus order, so the report does not depend on the
number of workers. CSV output is checkpointed every ``CHECKPOINT_EVERY``
graphs and can be resumed.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from itertools import combinations, islice
from math import comb
from multiprocessing import Pool
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from . import batch
from .corpus import enumerate_labeled_graphs, enumerate_labeled_trees
from .graph6 import emit_graph6, read_graph6
from .graphs import FamilySpec, Graph, build_family
from .theory import ConjectureVerdict, theorem7_applicable
from .tokens import size_guard

CHUNK = 1000
CHECKPOINT_EVERY = 10_000
# stacked eigensolves are split so one sub-batch holds at most this many matrix entries
MAX_BATCH_ENTRIES = 4_000_000

CSV_COLUMNS = ["graph6", "n", "k", "alpha_G", "alpha_FkG", "gap", "holds", "thm7_applicable", "wall_ms"]


def reduce_k(n: int, k: int) -> int:
    """F_k(G) and F_{n-k}(G) are isomorphic, so only k <= n/2 needs checking."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    return min(k, n - k)


def builtin_corpus(name: str) -> Path:
    path = resources.files("token_spectra") / "data" / f"{name}.g6"
    if not path.is_file():
        raise FileNotFoundError(f"no builtin corpus named {name!r}")
    return Path(str(path))


@dataclass
class SweepConfig:
    source: str  # exhaustive | trees | family | graph6 | random
    n: int | None = None
    n_max: int | None = None  # family sweeps run n..n_max
    family: str | None = None
    path: str | None = None
    count: int = 0  # random corpora
    edge_prob: float = 0.5
    seed: int = 0
    ks: tuple[int, ...] | None = None  # None: every level 1..n-1
    reduce: bool = True
    tol: float = 1e-8
    jobs: int = 1
    out: str | None = None
    fmt: str = "csv"
    guard: int | None = None
    timing: bool = False
    resume: bool = False

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.source not in ("exhaustive", "trees", "family", "graph6", "random"):
            raise ValueError(f"unknown corpus source {self.source!r}")
        if self.source in ("exhaustive", "trees", "random", "family") and self.n is None:
            raise ValueError(f"{self.source} corpus needs n")
        if self.source == "family" and not self.family:
            raise ValueError("family corpus needs a family kind")
        if self.source == "graph6" and not self.path:
            raise ValueError("graph6 corpus needs a path")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        if self.ks is not None and any(k < 1 for k in self.ks):
            raise ValueError("levels k must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def fingerprint(self) -> dict:
        d = asdict(self)
        for key in ("jobs", "resume", "out"):
            d.pop(key)
        d["ks"] = list(self.ks) if self.ks is not None else None
        return d


def family_graphs(kind: str, n_min: int, n_max: int) -> Iterator[Graph]:
    for n in range(n_min, n_max + 1):
        if kind == "complete_multipartite":
            # all bipartite splits n1 <= n2 with n1 + n2 = n
            for n1 in range(1, n // 2 + 1):
                yield build_family(FamilySpec(kind, (n1, n - n1)))
            continue
        try:
            spec = FamilySpec(kind, (n,))
        except ValueError:
            continue
        yield build_family(spec)


def random_graphs(n: int, count: int, p: float, seed: int) -> Iterator[Graph]:
    rng = np.random.default_rng(seed)
    pairs = list(combinations(range(1, n + 1), 2))
    for _ in range(count):
        keep = rng.random(len(pairs)) < p
        yield Graph.from_edges(n, [e for e, b in zip(pairs, keep) if b])


def corpus(config: SweepConfig) -> Iterator[Graph]:
    if config.source == "exhaustive":
        return enumerate_labeled_graphs(config.n)
    if config.source == "trees":
        return enumerate_labeled_trees(config.n)
    if config.source == "family":
        return family_graphs(config.family, config.n, config.n_max or config.n)
    if config.source == "random":
        return random_graphs(config.n, config.count, config.edge_prob, config.seed)
    path = config.path
    if path.startswith("builtin:"):
        path = str(builtin_corpus(path.split(":", 1)[1]))
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise OSError(f"cannot read corpus {path}: {exc}") from exc
    return read_graph6(lines)


def levels_for(n: int, ks: tuple[int, ...] | None, reduce: bool) -> list[int]:
    wanted = range(1, n) if ks is None else [k for k in ks if 1 <= k <= n - 1]
    if reduce:
        return sorted({reduce_k(n, k) for k in wanted})
    return sorted(set(wanted))


@dataclass
class ChunkResult:
    rows: list[ConjectureVerdict] = field(default_factory=list)
    graphs: int = 0
    skipped_guard: int = 0
    skipped_small: int = 0


def _second_eigenvalues(masks: np.ndarray, n: int, k: int) -> np.ndarray:
    size = comb(n, k)
    step = max(1, MAX_BATCH_ENTRIES // (size * size))
    out = [batch.token_spectra(masks[i : i + step], n, k)[:, 1] for i in range(0, len(masks), step)]
    return np.concatenate(out)


def evaluate_chunk(args) -> ChunkResult:
    graphs, ks, reduce, tol, guard, timing = args
    res = ChunkResult(graphs=len(graphs))
    by_n: dict[int, list[int]] = {}
    for i, g in enumerate(graphs):
        by_n.setdefault(g.n, []).append(i)
    rows: dict[int, list[ConjectureVerdict]] = {}
    for n, idx in by_n.items():
        if n < 2:
            res.skipped_small += len(idx)
            continue
        group = [graphs[i] for i in idx]
        masks = np.array([batch.edge_mask(g) for g in group])
        alpha = _second_eigenvalues(masks, n, 1)
        codes = [emit_graph6(g) for g in group]
        for k in levels_for(n, ks, reduce):
            if comb(n, k) > guard:
                res.skipped_guard += len(idx)
                continue
            t0 = time.perf_counter()
            alpha_k = alpha if k == 1 else _second_eigenvalues(masks, n, k)
            per_graph = (time.perf_counter() - t0) * 1000 / len(idx)
            for pos, i in enumerate(idx):
                rows.setdefault(i, []).append(
                    ConjectureVerdict(
                        codes[pos],
                        n,
                        k,
                        float(alpha[pos]),
                        float(alpha_k[pos]),
                        tol,
                        theorem7_applicable(group[pos], k),
                        per_graph if timing else None,
                    )
                )
    for i in sorted(rows):
        res.rows.extend(rows[i])
    return res


@dataclass
class Summary:
    graphs: int = 0
    rows: int = 0
    holds: int = 0
    fails: int = 0
    skipped_guard: int = 0
    skipped_small: int = 0
    thm7_checked: int = 0
    thm7_violations: int = 0
    thm7_hypothesis_unmet: int = 0
    min_gap: float | None = None
    max_abs_gap: float = 0.0
    failures: list[dict] = field(default_factory=list)

    def absorb(self, chunk: ChunkResult, tol: float) -> None:
        self.graphs += chunk.graphs
        self.skipped_guard += chunk.skipped_guard
        self.skipped_small += chunk.skipped_small
        prev: dict[tuple[str, int], ConjectureVerdict] = {}
        for row in chunk.rows:
            self.rows += 1
            gap = row.gap
            self.min_gap = gap if self.min_gap is None else min(self.min_gap, gap)
            self.max_abs_gap = max(self.max_abs_gap, abs(gap))
            if row.holds:
                self.holds += 1
            else:
                self.fails += 1
                self.failures.append(
                    {
                        "graph6": row.graph6,
                        "k": row.k,
                        "gap": gap,
                        "reproducer": f"token-spectra check --graph6 '{row.graph6}' --k {row.k} --tol {tol:g}",
                    }
                )
            prev[(row.graph6, row.k)] = row
            if row.theorem7_applicable and row.k >= 2:
                below = prev.get((row.graph6, row.k - 1))
                if row.k == 2 or (below is not None and below.holds):
                    self.thm7_checked += 1
                    if not row.holds:
                        self.thm7_violations += 1
                else:
                    self.thm7_hypothesis_unmet += 1

    @property
    def ok(self) -> bool:
        return self.fails == 0 and self.thm7_violations == 0


@dataclass
class SweepReport:
    config: SweepConfig
    rows: list[ConjectureVerdict]
    summary: Summary
    runtime_s: float

    @property
    def ok(self) -> bool:
        return self.summary.ok

    def summary_dict(self, timing: bool | None = None) -> dict:
        d = asdict(self.summary)
        d["ok"] = self.ok
        if self.config.timing if timing is None else timing:
            d["runtime_s"] = self.runtime_s
        return d


def _fmt(x: float) -> str:
    return format(x, ".12g")


def csv_row(row: ConjectureVerdict) -> list[str]:
    return [
        row.graph6,
        str(row.n),
        str(row.k),
        _fmt(row.alpha_g),
        _fmt(row.alpha_fk),
        _fmt(row.gap),
        "true" if row.holds else "false",
        "true" if row.theorem7_applicable else "false",
        "" if row.wall_ms is None else format(row.wall_ms, ".3f"),
    ]


def json_row(row: ConjectureVerdict) -> dict:
    d = row.to_dict()
    for key in ("alpha_G", "alpha_FkG", "gap"):
        d[key] = float(_fmt(d[key]))
    d["wall_ms"] = None if row.wall_ms is None else round(row.wall_ms, 3)
    return d


def _chunks(graphs: Iterable[Graph], size: int) -> Iterator[list[Graph]]:
    it = iter(graphs)
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def _checkpoint_path(stream: str) -> str:
    return stream + ".ckpt"


def sweep(config: SweepConfig, keep_rows: bool = True) -> SweepReport:
    """Run the conjecture over the configured corpus.

    With ``config.out`` set, rows are streamed to disk in corpus order (CSV
    directly, JSON via a temporary rows file) and checkpointed; otherwise they
    are only kept in memory.
    """
    start = time.perf_counter()
    guard = config.guard if config.guard is not None else size_guard()
    summary = Summary()
    rows: list[ConjectureVerdict] = []

    stream_path = None
    if config.out:
        stream_path = config.out if config.fmt == "csv" else config.out + ".rows.jsonl"

    done = 0
    fh = None
    if stream_path:
        ckpt = _checkpoint_path(stream_path)
        if config.resume and os.path.exists(ckpt):
            with open(ckpt) as f:
                state = json.load(f)
            if state["config"] != config.fingerprint():
                raise ValueError("checkpoint was written by a different sweep configuration")
            done = state["done"]
            summary = Summary(**state["summary"])
            fh = open(stream_path, "r+", newline="")
            fh.seek(state["offset"])
            fh.truncate()
        else:
            fh = open(stream_path, "w", newline="")
            if config.fmt == "csv":
                csv.writer(fh, lineterminator="\n").writerow(CSV_COLUMNS)

    def emit(chunk: ChunkResult) -> None:
        summary.absorb(chunk, config.tol)
        if keep_rows:
            rows.extend(chunk.rows)
        if fh is None:
            return
        if config.fmt == "csv":
            w = csv.writer(fh, lineterminator="\n")
            for row in chunk.rows:
                w.writerow(csv_row(row))
        else:
            for row in chunk.rows:
                fh.write(json.dumps(json_row(row)) + "\n")

    def save_checkpoint(count: int) -> None:
        fh.flush()
        state = {
            "config": config.fingerprint(),
            "done": count,
            "offset": fh.tell(),
            "summary": asdict(summary),
        }
        tmp = _checkpoint_path(stream_path) + ".tmp"
        with open(tmp, "w") as f:
            json.dump(state, f)
        os.replace(tmp, _checkpoint_path(stream_path))

    work = (
        (block, config.ks, config.reduce, config.tol, guard, config.timing)
        for block in _chunks(islice(corpus(config), done, None), CHUNK)
    )
    pool = Pool(config.jobs) if config.jobs > 1 else None
    try:
        results = pool.imap(evaluate_chunk, work) if pool else map(evaluate_chunk, work)
        for chunk in results:
            emit(chunk)
            done += chunk.graphs
            if fh is not None and done % CHECKPOINT_EVERY == 0:
                save_checkpoint(done)
    finally:
        if pool:
            pool.close()
            pool.join()

    report = SweepReport(config, rows, summary, time.perf_counter() - start)
    if fh is not None:
        fh.close()
        if config.fmt == "json":
            with open(stream_path) as f:
                lines = [json.loads(line) for line in f if line.strip()]
            with open(config.out, "w") as f:
                json.dump({"rows": lines, "summary": report.summary_dict()}, f, indent=1)
                f.write("\n")
            os.remove(stream_path)
        ckpt = _checkpoint_path(stream_path)
        if os.path.exists(ckpt):
            os.remove(ckpt)
    return report


def report_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report.rows:
        w.writerow(csv_row(row))
    return buf.getvalue()
