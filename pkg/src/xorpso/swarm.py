"""Binary particle swarm optimizers for wrapper feature selection.

Two optimizers share one driver:

* The XOR optimizer keeps position, velocity, and the memory bests as 0/1
  vectors.  A velocity bit is recomputed each iteration from the inertia
  term plus two random multiples of the disparities (bitwise XOR) between
  the current position and the personal and global bests, then thresholded
  at 0.5; the position flips exactly where the velocity bit is 1.
* The baseline optimizer is a conventional sigmoid-transfer binary PSO:
  real-valued velocity with cognitive/social coefficients, clamped, and the
  position re-sampled per bit with probability ``sigmoid(velocity)``.

Fitness is two-phase: below the accuracy threshold a particle scores its
raw validation accuracy; at or above it, the score becomes
``2 - selected/total`` so threshold-achieving particles always outrank the
rest and then compete on sparsity alone.

Determinism: runs are driven by a single seeded PCG64 generator with a
fixed draw order (particles in index order; one uniform block per particle
per iteration, laid out bit-major).  Given (seed, config, dataset), every
trace field except ``elapsed_ms`` is reproducible bit-for-bit, and in
synchronous mode the result is independent of the evaluation worker count.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Callable

import numpy as np

from .classify import KnnConfig, knn_accuracy
from .data import SplitDataset

ASYNCHRONOUS = "asynchronous"
SYNCHRONOUS = "synchronous"

# all-zero masks are never eligible for a personal or global best
EMPTY_MASK_FITNESS = -1.0

BRUTE_FORCE_MAX_FEATURES = 20

TRACE_FIELDS = (
    "iteration",
    "gbest_fitness",
    "gbest_accuracy",
    "gbest_selected",
    "inertia",
    "elapsed_ms",
)


def selected_count(mask: np.ndarray) -> int:
    """Number of selected features (non-zero bits)."""
    return int(np.count_nonzero(mask))


def selected_indices(mask: np.ndarray) -> list[int]:
    """Ascending indices of the selected features."""
    return [int(j) for j in np.flatnonzero(np.asarray(mask) != 0)]


def sigmoid(v):
    """Logistic transfer 1 / (1 + exp(-v))."""
    return 1.0 / (1.0 + np.exp(-np.asarray(v, dtype=np.float64)))


@dataclass(frozen=True)
class SeedingConfig:
    """How the initial population is biased by mutual-information scores."""

    seeded_fraction: float = 0.2
    top_m: int | None = None
    bins: int = 10

    def __post_init__(self):
        if not 0.0 <= self.seeded_fraction <= 1.0:
            raise ValueError(
                f"seeded_fraction must be in [0, 1], got {self.seeded_fraction}"
            )
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")


@dataclass(frozen=True)
class PsoConfig:
    """Swarm size, schedule, fitness threshold, and evaluation settings."""

    population: int = 100
    iterations: int = 100
    w_initial: float = 1.0
    w_decay: float = 0.05
    w_period: int = 5
    w_min: float = 0.0
    accuracy_threshold: float = 0.98
    knn: KnnConfig = field(default_factory=KnnConfig)
    seed: int = 42
    update_mode: str = ASYNCHRONOUS
    seeding: SeedingConfig = field(default_factory=SeedingConfig)

    def __post_init__(self):
        if self.population < 1:
            raise ValueError(f"population must be >= 1, got {self.population}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not 0.0 < self.w_initial <= 1.0:
            raise ValueError(f"w_initial must be in (0, 1], got {self.w_initial}")
        if self.w_decay < 0:
            raise ValueError(f"w_decay must be >= 0, got {self.w_decay}")
        if self.w_period < 1:
            raise ValueError(f"w_period must be >= 1, got {self.w_period}")
        if self.w_min < 0:
            raise ValueError(f"w_min must be >= 0, got {self.w_min}")
        if not 0.0 < self.accuracy_threshold <= 1.0:
            raise ValueError(
                f"accuracy_threshold must be in (0, 1], got {self.accuracy_threshold}"
            )
        if self.update_mode not in (ASYNCHRONOUS, SYNCHRONOUS):
            raise ValueError(
                f"update_mode must be {ASYNCHRONOUS!r} or {SYNCHRONOUS!r}, "
                f"got {self.update_mode!r}"
            )


@dataclass(frozen=True)
class BaselineConfig(PsoConfig):
    """Conventional binary PSO settings: cognitive/social weights and velocity clamp."""

    c1: float = 2.0
    c2: float = 2.0
    v_clamp: float = 4.0

    def __post_init__(self):
        super().__post_init__()
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("c1 and c2 must be positive")
        if self.v_clamp <= 0:
            raise ValueError(f"v_clamp must be positive, got {self.v_clamp}")


@dataclass
class Particle:
    """One candidate solution: position mask, velocity, and personal-best memory.

    The XOR optimizer stores velocity as 0/1 int8; the baseline stores a
    real-valued float64 velocity.
    """

    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float
    pbest_accuracy: float


@dataclass
class SwarmState:
    """Mutable optimizer state shared with per-iteration callbacks.

    ``iteration`` counts completed iterations; the global best never
    worsens and re-evaluating ``gbest_position`` reproduces
    ``gbest_fitness`` exactly.
    """

    particles: list[Particle]
    gbest_position: np.ndarray
    gbest_fitness: float
    gbest_accuracy: float
    iteration: int
    inertia: float


@dataclass(frozen=True)
class IterationRecord:
    """One trace row, emitted after each iteration."""

    iteration: int
    gbest_fitness: float
    gbest_accuracy: float
    gbest_selected: int
    inertia: float
    elapsed_ms: float

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in TRACE_FIELDS}


def inertia_at(iteration: int, config: PsoConfig) -> float:
    """Inertia weight for a 0-based iteration: stepwise decay, clamped below.

    ``max(w_min, w_initial - w_decay * floor(iteration / w_period))``; the
    defaults start at 1.0 and lose 0.05 every 5 iterations.
    """
    if iteration < 0:
        raise ValueError(f"iteration must be >= 0, got {iteration}")
    steps = iteration // config.w_period
    return max(config.w_min, config.w_initial - config.w_decay * steps)


def fitness(accuracy: float, selected: int, total: int, threshold: float) -> float:
    """Two-phase particle score.

    Empty selections get the sentinel -1 so they can never become a best.
    Below the threshold the score is the accuracy itself; at or above it the
    score is ``2 - selected/total``, which exceeds 1 and therefore dominates
    every sub-threshold particle while rewarding smaller subsets.
    """
    if selected == 0:
        return EMPTY_MASK_FITNESS
    if accuracy < threshold:
        return float(accuracy)
    return 2.0 - selected / total


def evaluate_particle(
    mask: np.ndarray, split: SplitDataset, config: PsoConfig
) -> tuple[float, float]:
    """Validation accuracy and fitness for a mask; (0, -1) for empty masks.

    Pure: identical inputs give identical outputs.
    """
    n_selected = selected_count(mask)
    if n_selected == 0:
        return 0.0, EMPTY_MASK_FITNESS
    acc = knn_accuracy(split, mask, config.knn)
    return acc, fitness(acc, n_selected, split.feature_count, config.accuracy_threshold)


def xor_velocity_update(
    particle: Particle, gbest: np.ndarray, w: float, rng: np.random.Generator
) -> np.ndarray:
    """Next binary velocity from inertia plus randomly weighted best-disparities.

    Per bit j::

        raw_j = w * V_j + R1_j * (Pbest_j XOR X_j) + R2_j * (Gbest_j XOR X_j)

    with R1 ~ Uniform(-1, 1) and R2 ~ Uniform(0, 1) drawn independently per
    bit, and the new velocity bit is 1 exactly where ``raw_j >= 0.5``.

    Draw order: one ``rng.random((n, 2))`` block per call; for each bit the
    first column maps to R1 and the second is R2.
    """
    x = particle.position
    if gbest.shape != x.shape:
        raise ValueError(
            f"gbest length {gbest.shape} does not match position {x.shape}"
        )
    u = rng.random((x.shape[0], 2))
    r1 = 2.0 * u[:, 0] - 1.0
    r2 = u[:, 1]
    raw = (
        w * particle.velocity
        + r1 * np.bitwise_xor(particle.pbest_position, x)
        + r2 * np.bitwise_xor(gbest, x)
    )
    return (raw >= 0.5).astype(np.int8)


def position_update(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Flip the position exactly where the velocity bit is 1: ``x XOR v``."""
    x = np.asarray(x)
    v = np.asarray(v)
    if x.shape != v.shape:
        raise ValueError(f"position {x.shape} and velocity {v.shape} differ in length")
    return np.bitwise_xor(x, v).astype(np.int8)


def _validate_initial_masks(initial_masks, config: PsoConfig, n_features: int):
    if len(initial_masks) != config.population:
        raise ValueError(
            f"got {len(initial_masks)} initial masks for a population of "
            f"{config.population}"
        )
    positions = []
    for i, mask in enumerate(initial_masks):
        arr = np.array(mask, dtype=np.int8)
        if arr.shape != (n_features,):
            raise ValueError(
                f"initial mask {i} has shape {arr.shape}, expected ({n_features},)"
            )
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError(f"initial mask {i} has bits outside {{0, 1}}")
        positions.append(arr)
    return positions


def _run_swarm(
    split: SplitDataset,
    config: PsoConfig,
    initial_masks,
    move: Callable,
    velocity_dtype,
    rng: np.random.Generator | None,
    workers: int,
    on_record,
) -> tuple[np.ndarray, list[IterationRecord]]:
    """Shared driver: init, iterate, update bests, emit one record per iteration."""
    n = split.feature_count
    positions = _validate_initial_masks(initial_masks, config, n)
    if rng is None:
        rng = np.random.default_rng(config.seed)
    synchronous = config.update_mode == SYNCHRONOUS

    pool = None
    if synchronous and workers > 1:
        pool = ThreadPoolExecutor(max_workers=workers)
    try:

        def evaluate_many(masks):
            if pool is None:
                return [evaluate_particle(m, split, config) for m in masks]
            return list(pool.map(lambda m: evaluate_particle(m, split, config), masks))

        # the initial population is evaluated up front so the first velocity
        # update has a defined global best
        initial_evals = evaluate_many(positions)
        particles = [
            Particle(
                position=pos,
                velocity=np.zeros(n, dtype=velocity_dtype),
                pbest_position=pos.copy(),
                pbest_fitness=fit,
                pbest_accuracy=acc,
            )
            for pos, (acc, fit) in zip(positions, initial_evals)
        ]
        state = SwarmState(
            particles=particles,
            gbest_position=particles[0].pbest_position.copy(),
            gbest_fitness=-np.inf,
            gbest_accuracy=0.0,
            iteration=0,
            inertia=config.w_initial,
        )
        for p in particles:
            if p.pbest_fitness > state.gbest_fitness:
                state.gbest_position = p.pbest_position.copy()
                state.gbest_fitness = p.pbest_fitness
                state.gbest_accuracy = p.pbest_accuracy

        def commit_pbest(p: Particle, pos, acc, fit):
            # strictly-greater updates: ties keep the incumbent
            if fit > p.pbest_fitness:
                p.pbest_position = pos.copy()
                p.pbest_fitness = fit
                p.pbest_accuracy = acc

        def commit_gbest(p: Particle):
            if p.pbest_fitness > state.gbest_fitness:
                state.gbest_position = p.pbest_position.copy()
                state.gbest_fitness = p.pbest_fitness
                state.gbest_accuracy = p.pbest_accuracy

        trace: list[IterationRecord] = []
        for t in range(config.iterations):
            started = time.perf_counter()
            w = inertia_at(t, config)
            if synchronous:
                # global best frozen for the whole iteration; random draws and
                # state commits stay serialized in particle-index order so the
                # outcome is independent of the worker count
                frozen = state.gbest_position.copy()
                moves = [move(p, frozen, w, rng) for p in particles]
                evals = evaluate_many([pos for _, pos in moves])
                for p, (vel, pos), (acc, fit) in zip(particles, moves, evals):
                    p.velocity = vel
                    p.position = pos
                    commit_pbest(p, pos, acc, fit)
                for p in particles:
                    commit_gbest(p)
            else:
                # literal loop order: a discovery by particle i moves the
                # global best seen by particle i+1 within the same iteration
                for p in particles:
                    vel, pos = move(p, state.gbest_position, w, rng)
                    acc, fit = evaluate_particle(pos, split, config)
                    p.velocity = vel
                    p.position = pos
                    commit_pbest(p, pos, acc, fit)
                    commit_gbest(p)
            state.iteration = t + 1
            state.inertia = w
            record = IterationRecord(
                iteration=t,
                gbest_fitness=state.gbest_fitness,
                gbest_accuracy=state.gbest_accuracy,
                gbest_selected=selected_count(state.gbest_position),
                inertia=w,
                elapsed_ms=(time.perf_counter() - started) * 1000.0,
            )
            trace.append(record)
            if on_record is not None:
                on_record(record, state)
        return state.gbest_position.copy(), trace
    finally:
        if pool is not None:
            pool.shutdown()


def run_xor_pso(
    split: SplitDataset,
    config: PsoConfig,
    initial_masks,
    *,
    rng: np.random.Generator | None = None,
    workers: int = 1,
    on_record=None,
) -> tuple[np.ndarray, list[IterationRecord]]:
    """Run the XOR optimizer; returns the best mask and the iteration trace.

    Velocities start at all-zero, the initial population is evaluated before
    iteration 0, and personal/global bests only move on strictly greater
    fitness.  ``on_record(record, state)``, when given, fires after every
    iteration.  ``workers`` parallelizes fitness evaluations in synchronous
    mode only; results do not depend on it.
    """

    def move(p: Particle, gbest, w, gen):
        vel = xor_velocity_update(p, gbest, w, gen)
        return vel, position_update(p.position, vel)

    return _run_swarm(
        split, config, initial_masks, move, np.int8, rng, workers, on_record
    )


def run_baseline_bpso(
    split: SplitDataset,
    config: BaselineConfig,
    initial_masks,
    *,
    rng: np.random.Generator | None = None,
    workers: int = 1,
    on_record=None,
) -> tuple[np.ndarray, list[IterationRecord]]:
    """Run the sigmoid-transfer binary PSO baseline.

    Per bit: ``V' = w*V + c1*R1*(Pbest - X) + c2*R2*(Gbest - X)`` with
    R1, R2 ~ Uniform(0, 1), clamped to ``[-v_clamp, v_clamp]``; the new
    position bit is 1 with probability ``sigmoid(V')``.  Draw order: one
    ``rng.random((n, 3))`` block per particle per iteration — columns R1,
    R2, and the position-sampling uniform.  Best-keeping and tracing match
    the XOR optimizer.
    """
    if not isinstance(config, BaselineConfig):
        raise TypeError("run_baseline_bpso requires a BaselineConfig")

    def move(p: Particle, gbest, w, gen):
        x = p.position
        u = gen.random((x.shape[0], 3))
        vel = (
            w * p.velocity
            + config.c1 * u[:, 0] * (p.pbest_position - x)
            + config.c2 * u[:, 1] * (gbest - x)
        )
        np.clip(vel, -config.v_clamp, config.v_clamp, out=vel)
        pos = (u[:, 2] < sigmoid(vel)).astype(np.int8)
        return vel, pos

    return _run_swarm(
        split, config, initial_masks, move, np.float64, rng, workers, on_record
    )


def brute_force_best(
    split: SplitDataset, config: PsoConfig
) -> tuple[np.ndarray, float]:
    """Exhaustively score every non-empty mask; ground truth for small instances.

    Ties go to the mask with fewer selected features, then to the
    lexicographically smallest bit vector.  Guarded at
    ``BRUTE_FORCE_MAX_FEATURES`` features since the search is O(2^n).
    """
    n = split.feature_count
    if n > BRUTE_FORCE_MAX_FEATURES:
        raise ValueError(
            f"exhaustive search is limited to {BRUTE_FORCE_MAX_FEATURES} "
            f"features, got {n}"
        )
    bit_positions = np.arange(n)
    best_mask = None
    best_fit = -np.inf
    best_sel = n + 1
    for m in range(1, 1 << n):
        mask = ((m >> bit_positions) & 1).astype(np.int8)
        _, fit = evaluate_particle(mask, split, config)
        sel = selected_count(mask)
        if fit > best_fit:
            better = True
        elif fit == best_fit:
            better = sel < best_sel or (
                sel == best_sel and tuple(mask) < tuple(best_mask)
            )
        else:
            better = False
        if better:
            best_mask = mask
            best_fit = fit
            best_sel = sel
    return best_mask, float(best_fit)


# --- trace serialization -------------------------------------------------

def record_to_json(record: IterationRecord) -> str:
    """One JSONL line with the trace fields in canonical order."""
    return json.dumps(record.to_dict())


def write_trace(records, path) -> None:
    """Write a whole trace as JSON lines."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(record_to_json(rec) + "\n")


def read_trace(path) -> list[IterationRecord]:
    """Read a JSONL trace, dropping an unterminated trailing fragment.

    A final line without a newline is an interrupted write and is rejected;
    a malformed line anywhere else raises.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] != "":
        lines = lines[:-1]  # truncated final line: never valid
    records = []
    for i, line in enumerate(lines):
        if not line:
            continue
        try:
            obj = json.loads(line)
            records.append(IterationRecord(**{k: obj[k] for k in TRACE_FIELDS}))
        except (json.JSONDecodeError, KeyError) as exc:
            raise ValueError(f"{path}: malformed trace line {i + 1}: {exc}") from None
    return records


class TraceWriter:
    """Streams trace records to disk, flushing after every line.

    Long runs stay observable in progress; a crash leaves at most one
    truncated final line, which :func:`read_trace` rejects.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._fh = None

    def __enter__(self):
        self._fh = self.path.open("w", encoding="utf-8")
        return self

    def write(self, record: IterationRecord) -> None:
        self._fh.write(record_to_json(record) + "\n")
        self._fh.flush()

    def __exit__(self, *exc):
        self._fh.close()
        self._fh = None
        return False
