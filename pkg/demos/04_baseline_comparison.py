"""Head-to-head: XOR velocity update vs. the classic sigmoid-transfer update.

Both optimizers get the identical split, identical starting populations,
and the same budget on every seed; only the movement rule differs.  The
XOR variant usually compresses harder once past the accuracy threshold.
"""

import statistics

import numpy as np

from xorpso import (
    BaselineConfig,
    PsoConfig,
    SynthSpec,
    generate_synthetic,
    run_baseline_bpso,
    run_xor_pso,
    score_features,
    seed_masks,
    standardize_split,
    stratified_split,
)


def main():
    ds = generate_synthetic(
        SynthSpec(n_samples=400, n_features=48, n_informative=8,
                  class_separation=2.0, seed=19)
    )
    split = standardize_split(stratified_split(ds, 0.2, seed=2))
    shared = dict(population=24, iterations=40, accuracy_threshold=0.95)
    configs = {"xor": PsoConfig(**shared), "baseline": BaselineConfig(**shared)}
    runners = {"xor": run_xor_pso, "baseline": run_baseline_bpso}
    scores = score_features(split.train, bin_count=10)

    finals = {name: [] for name in configs}
    print(f"{'seed':>4}  {'xor fit':>9} {'sel':>4}   {'base fit':>9} {'sel':>4}")
    for seed in range(5):
        children = np.random.SeedSequence(seed).spawn(3)
        rngs = [np.random.Generator(np.random.PCG64(c)) for c in children]
        masks = seed_masks(scores, shared["population"], rng=rngs[0])
        row = {}
        for name, rng in zip(("xor", "baseline"), rngs[1:]):
            _, trace = runners[name](split, configs[name], masks, rng=rng)
            finals[name].append(trace[-1])
            row[name] = trace[-1]
        print(
            f"{seed:>4}  {row['xor'].gbest_fitness:>9.4f} "
            f"{row['xor'].gbest_selected:>4}   "
            f"{row['baseline'].gbest_fitness:>9.4f} "
            f"{row['baseline'].gbest_selected:>4}"
        )

    print()
    for name, records in finals.items():
        print(
            f"{name:>8}: median fitness "
            f"{statistics.median(r.gbest_fitness for r in records):.4f}, "
            f"median selected "
            f"{statistics.median(r.gbest_selected for r in records):g} of 48"
        )


if __name__ == "__main__":
    main()
