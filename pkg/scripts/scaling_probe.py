#!/usr/bin/env python3
"""Wall-time scaling probe: how runtime responds to doubling N or c.

Times complete clustering runs with a fixed iteration count, interleaving
the configurations so load drift affects all of them alike, and prints the
median ratios. Near-linear scaling in both N and c shows up as ratios
close to 2.

    python scripts/scaling_probe.py --base-n 200 --base-c 200 --runs 5
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from scc.dataio import SynthSpec, synth_subspace_mixture
from scc.engine import SccConfig, scc_run


def make_case(n_total: int, n_sets: int, ambient_dim: int, seed: int):
    spec = SynthSpec(
        n_clusters=2, points_per_cluster=n_total // 2, subspace_dim=3,
        ambient_dim=ambient_dim, noise_sigma=0.03, seed=seed,
    )
    data, _ = synth_subspace_mixture(spec)
    config = SccConfig(
        subspace_dim=3, n_clusters=2, n_sample_sets=n_sets,
        max_iterations=5, patience=10, seed=seed,
    )
    return data, config


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--base-n", type=int, default=200)
    parser.add_argument("--base-c", type=int, default=200)
    parser.add_argument("--ambient-dim", type=int, default=20)
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--seed", type=int, default=3)
    args = parser.parse_args()

    cases = {
        "base": make_case(args.base_n, args.base_c, args.ambient_dim, args.seed),
        "2N": make_case(2 * args.base_n, args.base_c, args.ambient_dim, args.seed),
        "2c": make_case(args.base_n, 2 * args.base_c, args.ambient_dim, args.seed),
    }
    for data, config in cases.values():
        scc_run(data, config)  # warm-up
    times = {name: [] for name in cases}
    for _ in range(args.runs):
        for name, (data, config) in cases.items():
            start = time.perf_counter()
            scc_run(data, config)
            times[name].append(time.perf_counter() - start)

    medians = {name: float(np.median(vals)) for name, vals in times.items()}
    print(f"N={args.base_n}, c={args.base_c}: median {medians['base']:.3f} s over {args.runs} runs")
    print(f"doubling N -> x{medians['2N'] / medians['base']:.2f}")
    print(f"doubling c -> x{medians['2c'] / medians['base']:.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
