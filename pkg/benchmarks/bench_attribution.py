#!/usr/bin/env python3
"""Benchmark the scoring kernels: compiled extension vs pure-Python fallback.

Leave-one-out attribution re-scores the token sequence once per token, so it
dominates pipeline runtime; this script times that kernel path over a
simulated corpus and cross-checks that both kernels produce identical scores.

Usage: python benchmarks/bench_attribution.py [--items N] [--repeat R]
"""

from __future__ import annotations

import argparse
import statistics
import time

from itemcert.clock import fixed_clock
from itemcert.config import PipelineConfig
from itemcert.simulator import SimulationProfile, simulate_corpus
from itemcert.taxonomy import _backend
from itemcert.taxonomy.engine import ClassifierConfig, _kernel_args, _prepare, tokenize
from itemcert.taxonomy.lexicon import default_lexicon


def build_workload(items: int):
    profile = SimulationProfile(
        name="bench",
        total=items,
        high=items // 2,
        medium=items // 3,
        low=items - items // 2 - items // 3,
        planted_incomplete_rationales_in_high=0,
        planted_major_flags_in_medium=0,
        seed=11,
    )
    config = PipelineConfig()
    workload = []
    for sim in simulate_corpus(profile, config=config, clock=fixed_clock()):
        lexicon = default_lexicon(sim.item.declared_level.framework)
        features = _prepare(tokenize(sim.item.stem), lexicon)
        workload.append(_kernel_args(features, ClassifierConfig()))
    return workload


def time_kernel(kernel, workload, repeat: int) -> float:
    runs = []
    for _ in range(repeat):
        start = time.perf_counter()
        for args in workload:
            kernel.leave_one_out(*args)
        runs.append(time.perf_counter() - start)
    return min(runs)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--items", type=int, default=500)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = _backend.available_backends()
    workload = build_workload(args.items)
    tokens = statistics.mean(len(w[0]) for w in workload)
    print(f"workload: {len(workload)} stems, mean {tokens:.1f} tokens, "
          f"best of {args.repeat} runs\n")

    # Cross-check before timing: identical scores from every backend.
    reference = None
    for name, kernel in backends.items():
        scores = [kernel.leave_one_out(*arguments) for arguments in workload[:50]]
        if reference is None:
            reference = scores
        elif scores != reference:
            raise SystemExit(f"backend {name} disagrees with the reference scores")

    timings = {name: time_kernel(kernel, workload, args.repeat) for name, kernel in backends.items()}
    baseline = timings.get("python")
    for name, elapsed in sorted(timings.items(), key=lambda kv: kv[1]):
        rate = len(workload) / elapsed
        line = f"{name:>8}: {elapsed * 1e3:8.2f} ms  ({rate:10.0f} items/s)"
        if baseline is not None and name != "python":
            line += f"  speedup vs python: {baseline / elapsed:.1f}x"
        print(line)
    if "cython" not in timings:
        print("\ncompiled kernel not available; build it with: pip install -e . "
              "--no-build-isolation")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
