"""Command-line driver for reproducible feature-selection runs.

Subcommands
-----------
select
    Run one optimizer (``xor``, ``baseline``, or ``oracle``) on a CSV or
    synthetic dataset; writes ``trace.jsonl``, ``result.json``, and
    ``selected.csv`` into the output directory.
compare
    Run the XOR optimizer and the sigmoid baseline over a list of seeds on
    the identical split; writes per-run traces and ``summary.csv``.
mi-report
    Rank every feature by mutual information with the label; writes
    ``mi.csv`` sorted by score.
synth-gen
    Materialize a synthetic dataset as ``synth.csv`` plus its provenance
    sidecar.

Configuration is resolved as: command-line flag > ``--config`` JSON file >
``XORPSO_SEED`` environment variable (seed only) > built-in default.  A
``result.json`` from a previous run can be passed straight to ``--config``;
its embedded config echo reproduces the run.  Traces stream to disk one
line per iteration; every other output file is written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import tempfile
import time
from dataclasses import dataclass, asdict, fields
from pathlib import Path

import numpy as np

from .classify import EmptyMaskError, KnnConfig
from .data import (
    DatasetError,
    FeatureDataset,
    SynthSpec,
    generate_synthetic,
    load_dataset,
    provenance_path,
    save_dataset,
    standardize_split,
    stratified_split,
)
from .rank import score_features, seed_masks
from .swarm import (
    ASYNCHRONOUS,
    SYNCHRONOUS,
    BaselineConfig,
    PsoConfig,
    SeedingConfig,
    TraceWriter,
    brute_force_best,
    evaluate_particle,
    run_baseline_bpso,
    run_xor_pso,
    selected_indices,
)

SEED_ENV_VAR = "XORPSO_SEED"
DEFAULT_SEED = 42

OPTIMIZERS = ("xor", "baseline", "oracle")


class CliError(ValueError):
    """User-facing configuration or input problem; printed without a traceback."""


@dataclass
class RunConfig:
    """Flat, JSON-serializable record of everything that defines a run.

    Field names match the CLI flag names (dashes as underscores) so flag
    values, config files, and the ``result.json`` echo merge mechanically.
    ``c1``/``c2``/``v_clamp``/``w_min`` have no dedicated flags and are
    settable through a config file only.
    """

    data: str | None = None
    label_column: str = "label"
    synth: str | None = None
    optimizer: str = "xor"
    population: int = 100
    iterations: int = 100
    w_initial: float = 1.0
    w_decay: float = 0.05
    w_period: int = 5
    w_min: float = 0.0
    threshold: float = 0.98
    knn_k: int = 5
    val_fraction: float = 0.2
    seed: int = DEFAULT_SEED
    seeded_fraction: float = 0.2
    top_m: int | None = None
    bins: int = 10
    workers: int = 1
    out: str = "."
    update_mode: str = ASYNCHRONOUS
    c1: float = 2.0
    c2: float = 2.0
    v_clamp: float = 4.0

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise CliError(
                f"optimizer must be one of {', '.join(OPTIMIZERS)}, "
                f"got {self.optimizer!r}"
            )
        if self.workers < 1:
            raise CliError(f"workers must be >= 1, got {self.workers}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise CliError(f"unknown config key(s): {', '.join(unknown)}")
        return cls(**values)

    def pso_config(self) -> PsoConfig:
        return PsoConfig(
            population=self.population,
            iterations=self.iterations,
            w_initial=self.w_initial,
            w_decay=self.w_decay,
            w_period=self.w_period,
            w_min=self.w_min,
            accuracy_threshold=self.threshold,
            knn=KnnConfig(k=self.knn_k),
            seed=self.seed,
            update_mode=self.update_mode,
            seeding=SeedingConfig(
                seeded_fraction=self.seeded_fraction,
                top_m=self.top_m,
                bins=self.bins,
            ),
        )

    def baseline_config(self) -> BaselineConfig:
        base = self.pso_config()
        return BaselineConfig(
            **{f.name: getattr(base, f.name) for f in fields(PsoConfig)},
            c1=self.c1,
            c2=self.c2,
            v_clamp=self.v_clamp,
        )


def parse_synth(text: str) -> SynthSpec:
    """Parse a ``key=value`` synthetic-data spec.

    Required keys: ``n`` (samples), ``f`` (features), ``inf`` (informative
    count).  Optional: ``sep`` (class separation, default 2.0), ``noise``
    (noise std, default 1.0), ``seed`` (default 0; independent of the run
    seed so re-seeding an optimizer never changes the data).
    """
    values = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise CliError(f"synth spec {text!r}: expected key=value, got {part!r}")
        key, _, raw = part.partition("=")
        values[key.strip()] = raw.strip()
    known = {"n", "f", "inf", "sep", "noise", "seed"}
    unknown = sorted(set(values) - known)
    if unknown:
        raise CliError(f"synth spec {text!r}: unknown key(s) {', '.join(unknown)}")
    missing = sorted({"n", "f", "inf"} - set(values))
    if missing:
        raise CliError(f"synth spec {text!r}: missing key(s) {', '.join(missing)}")
    try:
        return SynthSpec(
            n_samples=int(values["n"]),
            n_features=int(values["f"]),
            n_informative=int(values["inf"]),
            class_separation=float(values.get("sep", 2.0)),
            noise_std=float(values.get("noise", 1.0)),
            seed=int(values.get("seed", 0)),
        )
    except ValueError as exc:
        raise CliError(f"synth spec {text!r}: {exc}") from None


def _load_config_file(path: str) -> dict:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"config file {path} is not valid JSON: {exc}") from None
    if isinstance(obj, dict) and isinstance(obj.get("config"), dict):
        obj = obj["config"]  # a result.json works directly as a config file
    if not isinstance(obj, dict):
        raise CliError(f"config file {path} must hold a JSON object")
    return obj


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, environment, config file, and flags into a RunConfig."""
    merged = RunConfig().to_dict()
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            merged["seed"] = int(env_seed)
        except ValueError:
            raise CliError(
                f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}"
            ) from None
    config_path = getattr(args, "config", None)
    if config_path is not None:
        file_values = _load_config_file(config_path)
        merged.update(RunConfig.from_dict({**merged, **file_values}).to_dict())
    flag_values = {
        key: value
        for key, value in vars(args).items()
        if key in merged and value is not None
    }
    merged.update(flag_values)
    return RunConfig.from_dict(merged)


def _load_or_generate(config: RunConfig) -> FeatureDataset:
    if (config.data is None) == (config.synth is None):
        raise CliError("exactly one of --data and --synth is required")
    if config.data is not None:
        return load_dataset(config.data, label_column=config.label_column)
    return generate_synthetic(parse_synth(config.synth))


def _prepared_split(config: RunConfig, dataset: FeatureDataset):
    split = stratified_split(dataset, config.val_fraction, config.seed)
    return standardize_split(split)


def _atomic_write_text(path: Path, text: str) -> None:
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def _write_result(path: Path, config: RunConfig, mask, fitness_value,
                  accuracy, n_features, iterations_run, wall_ms) -> None:
    result = {
        "selected_indices": selected_indices(mask),
        "selected_count": len(selected_indices(mask)),
        "feature_count": n_features,
        "fitness": fitness_value,
        "accuracy": accuracy,
        "seed": config.seed,
        "optimizer": config.optimizer,
        "iterations_run": iterations_run,
        "wall_ms": wall_ms,
        "config": config.to_dict(),
    }
    _atomic_write_text(path, json.dumps(result, indent=2) + "\n")


def _write_selected_csv(path: Path, mask, scores) -> None:
    lines = ["index,feature,mi_score"]
    for j in selected_indices(mask):
        lines.append(f"{j},f{j},{float(scores.scores[j])!r}")
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _seeded_streams(seed: int, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def _run_one(optimizer: str, split, run_config, masks, rng, workers, on_record):
    runner = run_xor_pso if optimizer == "xor" else run_baseline_bpso
    return runner(
        split, run_config, masks, rng=rng, workers=workers, on_record=on_record
    )


def cmd_select(config: RunConfig) -> int:
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset = _load_or_generate(config)
    split = _prepared_split(config, dataset)
    scores = score_features(split.train, bin_count=config.bins)
    trace_path = out_dir / "trace.jsonl"

    if config.optimizer == "oracle":
        started = time.perf_counter()
        mask, best_fitness = brute_force_best(split, config.pso_config())
        wall_ms = (time.perf_counter() - started) * 1000.0
        accuracy, _ = evaluate_particle(mask, split, config.pso_config())
        trace_path.write_text("", encoding="utf-8")  # no iterations to trace
        iterations_run = 0
    else:
        seeding_rng, swarm_rng = _seeded_streams(config.seed, 2)
        masks = seed_masks(
            scores,
            config.population,
            seeded_fraction=config.seeded_fraction,
            top_m=config.top_m,
            rng=seeding_rng,
        )
        run_config = (
            config.pso_config()
            if config.optimizer == "xor"
            else config.baseline_config()
        )
        with TraceWriter(trace_path) as writer:
            mask, trace = _run_one(
                config.optimizer,
                split,
                run_config,
                masks,
                swarm_rng,
                config.workers,
                lambda record, state: writer.write(record),
            )
        final = trace[-1]
        best_fitness, accuracy = final.gbest_fitness, final.gbest_accuracy
        wall_ms = sum(record.elapsed_ms for record in trace)
        iterations_run = len(trace)

    _write_result(
        out_dir / "result.json", config, mask, best_fitness, accuracy,
        split.feature_count, iterations_run, wall_ms,
    )
    _write_selected_csv(out_dir / "selected.csv", mask, scores)
    n_selected = len(selected_indices(mask))
    print(
        f"{config.optimizer}: fitness={best_fitness:.6f} accuracy={accuracy:.4f} "
        f"selected={n_selected}/{split.feature_count} -> {out_dir / 'result.json'}"
    )
    return 0


def cmd_compare(config: RunConfig, seeds: list[int]) -> int:
    if not seeds:
        raise CliError("compare needs at least one seed")
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset = _load_or_generate(config)
    # one split for every run: differences in the summary come from the
    # optimizers and their seeds, never from resampled data
    split = _prepared_split(config, dataset)
    scores = score_features(split.train, bin_count=config.bins)

    finals = {"xor": [], "baseline": []}
    run_configs = {"xor": config.pso_config(), "baseline": config.baseline_config()}
    for seed in seeds:
        seeding_rng, xor_rng, baseline_rng = _seeded_streams(seed, 3)
        masks = seed_masks(
            scores,
            config.population,
            seeded_fraction=config.seeded_fraction,
            top_m=config.top_m,
            rng=seeding_rng,
        )
        for optimizer, rng in (("xor", xor_rng), ("baseline", baseline_rng)):
            trace_path = out_dir / f"trace_{optimizer}_{seed}.jsonl"
            with TraceWriter(trace_path) as writer:
                _, trace = _run_one(
                    optimizer,
                    split,
                    run_configs[optimizer],
                    masks,
                    rng,
                    config.workers,
                    lambda record, state: writer.write(record),
                )
            finals[optimizer].append(trace)

    lines = ["optimizer,runs,median_fitness,median_accuracy,median_selected,mean_wall_ms"]
    for optimizer in ("xor", "baseline"):
        traces = finals[optimizer]
        last = [trace[-1] for trace in traces]
        median_fitness = statistics.median(r.gbest_fitness for r in last)
        median_accuracy = statistics.median(r.gbest_accuracy for r in last)
        median_selected = statistics.median(r.gbest_selected for r in last)
        mean_wall = statistics.mean(
            sum(r.elapsed_ms for r in trace) for trace in traces
        )
        lines.append(
            f"{optimizer},{len(traces)},{median_fitness!r},{median_accuracy!r},"
            f"{median_selected!r},{mean_wall!r}"
        )
        print(
            f"{optimizer}: median_fitness={median_fitness:.6f} "
            f"median_accuracy={median_accuracy:.4f} "
            f"median_selected={median_selected:g} over {len(traces)} seed(s)"
        )
    _atomic_write_text(out_dir / "summary.csv", "\n".join(lines) + "\n")
    print(f"wrote {out_dir / 'summary.csv'}")
    return 0


def cmd_mi_report(config: RunConfig) -> int:
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset = _load_or_generate(config)
    scores = score_features(dataset, bin_count=config.bins)
    lines = ["rank,feature_index,feature,score"]
    for rank, j in enumerate(scores.ranking()):
        lines.append(f"{rank},{j},f{j},{float(scores.scores[j])!r}")
    _atomic_write_text(out_dir / "mi.csv", "\n".join(lines) + "\n")
    top = scores.ranking()[0]
    print(
        f"wrote {out_dir / 'mi.csv'} ({scores.feature_count} features, "
        f"top: f{top}={scores.scores[top]:.6f})"
    )
    return 0


def cmd_synth_gen(config: RunConfig) -> int:
    if config.synth is None:
        raise CliError("synth-gen requires --synth")
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = parse_synth(config.synth)
    dataset = generate_synthetic(spec)
    target = out_dir / "synth.csv"
    tmp = out_dir / f"synth.tmp{os.getpid()}.csv"
    try:
        save_dataset(dataset, tmp)
        os.replace(provenance_path(tmp), provenance_path(target))
        os.replace(tmp, target)
    except BaseException:
        for leftover in (tmp, provenance_path(tmp)):
            if leftover.exists():
                leftover.unlink()
        raise
    informative = dataset.provenance.informative_indices
    print(
        f"wrote {target} ({spec.n_samples} samples, {spec.n_features} features, "
        f"{len(informative)} informative)"
    )
    return 0


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", help="CSV dataset path")
    parser.add_argument("--label-column", help="label column name (default: label)")
    parser.add_argument(
        "--synth",
        help="synthetic data spec, e.g. n=400,f=64,inf=8[,sep=2.0][,noise=1.0][,seed=0]",
    )
    parser.add_argument("--config", help="JSON config file (flags override it)")
    parser.add_argument("--out", help="output directory (default: current directory)")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--population", type=int, help="swarm size")
    parser.add_argument("--iterations", type=int, help="iteration count")
    parser.add_argument("--w-initial", type=float, help="starting inertia weight")
    parser.add_argument("--w-decay", type=float, help="inertia drop per period")
    parser.add_argument("--w-period", type=int, help="iterations per inertia step")
    parser.add_argument("--threshold", type=float, help="accuracy threshold")
    parser.add_argument("--knn-k", type=int, help="k for the k-NN evaluator (odd)")
    parser.add_argument("--val-fraction", type=float, help="validation fraction")
    parser.add_argument("--seed", type=int, help="run seed")
    parser.add_argument("--seeded-fraction", type=float, help="fraction of MI-seeded masks")
    parser.add_argument("--top-m", type=int, help="top-ranked bits forced on in seeded masks")
    parser.add_argument("--bins", type=int, help="discretization bins for MI")
    parser.add_argument("--workers", type=int, help="evaluation threads (synchronous mode)")
    parser.add_argument(
        "--update-mode",
        choices=[ASYNCHRONOUS, SYNCHRONOUS],
        help="global-best update discipline",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorpso",
        description="Wrapper feature selection with XOR-based binary particle swarms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_select = sub.add_parser("select", help="run one optimizer and save its result")
    _add_data_flags(p_select)
    _add_run_flags(p_select)
    p_select.add_argument(
        "--optimizer", choices=list(OPTIMIZERS), help="xor, baseline, or oracle"
    )

    p_compare = sub.add_parser(
        "compare", help="run XOR and baseline optimizers across seeds"
    )
    _add_data_flags(p_compare)
    _add_run_flags(p_compare)
    p_compare.add_argument(
        "--seeds", help="comma-separated run seeds (default: the single run seed)"
    )

    p_mi = sub.add_parser("mi-report", help="rank features by mutual information")
    _add_data_flags(p_mi)
    p_mi.add_argument("--bins", type=int, help="discretization bins for MI")
    p_mi.add_argument("--seed", type=int, help="run seed (recorded in config echo)")

    p_synth = sub.add_parser("synth-gen", help="write a synthetic dataset to disk")
    p_synth.add_argument(
        "--synth",
        help="synthetic data spec, e.g. n=400,f=64,inf=8[,sep=2.0][,noise=1.0][,seed=0]",
    )
    p_synth.add_argument("--config", help="JSON config file (flags override it)")
    p_synth.add_argument("--out", help="output directory (default: current directory)")
    return parser


def _parse_seeds(args: argparse.Namespace, config: RunConfig) -> list[int]:
    raw = getattr(args, "seeds", None)
    if raw is None:
        return [config.seed]
    try:
        return [int(part.strip()) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise CliError(f"--seeds must be comma-separated integers, got {raw!r}") from None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args)
        if args.command == "select":
            return cmd_select(config)
        if args.command == "compare":
            return cmd_compare(config, _parse_seeds(args, config))
        if args.command == "mi-report":
            return cmd_mi_report(config)
        return cmd_synth_gen(config)
    except (CliError, DatasetError, EmptyMaskError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
