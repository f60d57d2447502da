"""Wall-clock timing of the full pipeline on each corpus equation.

Usage: python3 benchmarks/bench_pipeline.py [--repeat K] [--order N]
"""
from __future__ import annotations

import argparse
import statistics
import time
from pathlib import Path

from catalytic.pipeline import PipelineConfig, run_pipeline

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--order", type=int, default=60)
    args = parser.parse_args()
    print(f"{'equation':<16}{'verdict':<14}{'median s':>10}{'min s':>10}  stage breakdown (last run)")
    for path in sorted(CORPUS.glob("*.feq")):
        times = []
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            res = run_pipeline(PipelineConfig(order=args.order), path)
            times.append(time.perf_counter() - t0)
        stages = ", ".join(f"{k} {v:.2f}" for k, v in res.timings.items() if "." not in k)
        print(f"{path.stem:<16}{res.verdict or 'error':<14}{statistics.median(times):>10.3f}{min(times):>10.3f}  {stages}")


if __name__ == "__main__":
    main()
