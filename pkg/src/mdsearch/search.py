"""Violation-guided search embedded in the reverse denoising loop.

Each reverse step can refine the denoiser's proposal before the chain
advances: draw a pool of fully specified candidates from the proposal
distribution (already-unmasked positions clamped), keep the least-violating
one, then greedily walk single-token edits while the aggregate violation
strictly decreases. The refined candidate drives the guided reverse kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .constraints.base import Constraint, ViolationReport
from .denoise import Denoiser, check_rows
from .diffusion import NoiseSchedule, guided_reverse_step, vanilla_reverse_step
from .errors import ConfigError, ContractError, SampleError
from .tasks import Instance
from .vocab import EditableRegion, Vocab, fully_masked, masked_positions

PLACEMENTS = ("off", "last_step", "all_steps")


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the per-step search.

    ``candidates`` is the proposal pool size per step, ``max_rounds`` caps
    greedy refinement (ignored for ``last_step`` placement, which refines
    until no improving neighbor remains), and ``allow_unmask_edits``
    widens refinement edits from currently-masked positions to the whole
    editable region.
    """

    candidates: int = 32
    max_rounds: int = 16
    placement: str = "all_steps"
    allow_unmask_edits: bool = True
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.candidates < 1:
            raise ConfigError("candidate pool must hold at least one draw")
        if self.max_rounds < 0:
            raise ConfigError("refinement rounds must be non-negative")
        if self.placement not in PLACEMENTS:
            raise ConfigError(f"placement must be one of {PLACEMENTS}")
        if self.weights is not None and any(w < 0 for w in self.weights):
            raise ConfigError("constraint weights must be non-negative")


def resolve_weights(weights, constraints: tuple[Constraint, ...]) -> np.ndarray:
    if weights is None:
        return np.ones(len(constraints))
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (len(constraints),):
        raise ContractError(
            f"{weights.size} weights for {len(constraints)} constraints")
    return weights


def aggregate_violation(values: np.ndarray, constraints: tuple[Constraint, ...],
                        weights=None, tier_order=None) -> ViolationReport:
    """Evaluate every constraint and fold the results into one report."""
    w = resolve_weights(weights, constraints)
    nu = tuple(float(c.violation(values)) for c in constraints)
    if any(v < 0 for v in nu):
        raise ContractError("violations must be non-negative")
    tiers = tuple(nu[i] for i in tier_order) if tier_order is not None else None
    return ViolationReport(nu, tuple(float(x) for x in w), tiers)


def proposal_draws(rows: np.ndarray, x_t: np.ndarray, count: int,
                   rng: np.random.Generator, mask_id: int) -> np.ndarray:
    """``count`` independent proposal samples consistent with ``x_t``.

    Masked positions draw from the denoiser rows; unmasked positions are
    clamped to their current values.
    """
    if count < 1:
        raise ConfigError("need at least one draw")
    x_t = np.asarray(x_t)
    draws = np.tile(x_t, (count, 1))
    masked = masked_positions(x_t, mask_id)
    if masked.size:
        sub = np.asarray(rows, dtype=np.float64)[masked]
        cdf = np.cumsum(sub, axis=1)
        u = rng.random((count, masked.size)) * cdf[:, -1]
        idx = (cdf[None, :, :] <= u[:, :, None]).sum(axis=2)
        draws[:, masked] = np.minimum(idx, sub.shape[1] - 1)
    return draws


class PoolPick(NamedTuple):
    candidate: np.ndarray
    report: ViolationReport
    first_total: float


def best_of_pool(rows: np.ndarray, x_t: np.ndarray, count: int,
                 constraints: tuple[Constraint, ...], weights,
                 rng: np.random.Generator, mask_id: int) -> PoolPick:
    """Least-violating sample among ``count`` proposal draws.

    Ties break toward the earliest draw. ``first_total`` is the violation
    of the first draw, i.e. what a pool of one would have returned.
    """
    draws = proposal_draws(rows, x_t, count, rng, mask_id)
    best = None
    best_report = None
    first_total = None
    for i in range(count):
        report = aggregate_violation(draws[i], constraints, weights)
        total = report.total
        if first_total is None:
            first_total = total
        if best_report is None or total < best_report.total:
            best, best_report = draws[i], report
    return PoolPick(best, best_report, first_total)


def neighborhood(candidate: np.ndarray, vocab: Vocab, region: EditableRegion,
                 allow_unmask_edits: bool = True,
                 x_t: np.ndarray | None = None
                 ) -> Iterator[tuple[int, int, np.ndarray]]:
    """Every admissible single-token replacement of ``candidate``.

    Yields ``(pos, token, edited)`` in ascending (pos, token) order,
    skipping no-ops. With ``allow_unmask_edits`` disabled the editable set
    shrinks to positions still masked in ``x_t``.
    """
    candidate = np.asarray(candidate)
    if np.any(candidate == vocab.mask_id):
        raise ContractError("neighborhood requires a fully specified candidate")
    positions = region.positions
    if not allow_unmask_edits:
        if x_t is None:
            raise ContractError("restricting edits to masked positions needs x_t")
        still_masked = set(masked_positions(x_t, vocab.mask_id).tolist())
        positions = tuple(p for p in positions if p in still_masked)
    for pos in positions:
        for token in range(vocab.size):
            if token == candidate[pos]:
                continue
            edited = np.array(candidate)
            edited[pos] = token
            yield pos, token, edited


class RefineResult(NamedTuple):
    candidate: np.ndarray
    report: ViolationReport
    rounds: int
    history: tuple[float, ...]


def refine(start: np.ndarray, constraints: tuple[Constraint, ...], weights,
           vocab: Vocab, region: EditableRegion,
           max_rounds: int | None,
           allow_unmask_edits: bool = True,
           x_t: np.ndarray | None = None) -> RefineResult:
    """Greedy best-neighbor descent on the aggregate violation.

    Each round scans the full single-edit neighborhood and takes the best
    strictly improving move; equal-valued moves resolve to the lowest
    (position, token) pair. Stops on the round cap (``None`` means
    unbounded), on local optimality, or as soon as the violation hits zero.
    ``history`` records the aggregate after the start and each accepted
    move.
    """
    w = resolve_weights(weights, constraints)
    current = np.array(start, dtype=np.int64)
    positions = region.positions
    if not allow_unmask_edits:
        if x_t is None:
            raise ContractError("restricting edits to masked positions needs x_t")
        still_masked = set(masked_positions(x_t, vocab.mask_id).tolist())
        positions = tuple(p for p in positions if p in still_masked)
    trackers = [c.tracker(current) for c in constraints]

    def current_total():
        return float(sum(wk * tr.value() for wk, tr in zip(w, trackers)))

    total = current_total()
    history = [total]
    rounds = 0
    pos_arr = np.array(positions, dtype=np.int64)
    while total > 0 and positions and (max_rounds is None or rounds < max_rounds):
        scores = np.zeros((len(positions), vocab.size))
        for wk, tracker in zip(w, trackers):
            if wk != 0.0:
                scores += wk * tracker.peek_block(pos_arr, vocab.size)
        scores[np.arange(len(positions)), current[pos_arr]] = np.inf
        flat = int(np.argmin(scores))
        best = float(scores.ravel()[flat])
        if not best < total:
            break
        pos = int(pos_arr[flat // vocab.size])
        token = flat % vocab.size
        for tracker in trackers:
            tracker.commit(pos, token)
        current[pos] = token
        total = current_total()
        history.append(total)
        rounds += 1
    nu = tuple(float(tr.value()) for tr in trackers)
    report = ViolationReport(nu, tuple(float(x) for x in w))
    return RefineResult(current, report, rounds, tuple(history))


class SearchOutcome(NamedTuple):
    candidate: np.ndarray
    report: ViolationReport
    first_total: float
    pool_total: float
    rounds: int


def search_active(placement: str, t: int) -> bool:
    return placement == "all_steps" or (placement == "last_step" and t == 1)


def search_step(rows: np.ndarray, x_t: np.ndarray, t: int, config: SearchConfig,
                instance: Instance, rng: np.random.Generator) -> SearchOutcome:
    """The per-step search operator.

    When the placement activates search at step ``t`` this is pool
    selection followed by greedy refinement; otherwise a single clamped
    proposal draw passes through untouched, which reproduces plain
    proposal decoding.
    """
    vocab = instance.vocab
    check_rows(rows, x_t, vocab)
    active = search_active(config.placement, t)
    pool = config.candidates if active else 1
    pick = best_of_pool(rows, x_t, pool, instance.constraints, config.weights,
                        rng, vocab.mask_id)
    if not active:
        return SearchOutcome(pick.candidate, pick.report, pick.first_total,
                             pick.report.total, 0)
    cap = None if config.placement == "last_step" else config.max_rounds
    refined = refine(pick.candidate, instance.constraints, config.weights,
                     vocab, instance.region, cap,
                     allow_unmask_edits=config.allow_unmask_edits, x_t=x_t)
    return SearchOutcome(refined.candidate, refined.report, pick.first_total,
                         pick.report.total, refined.rounds)


@dataclass(frozen=True)
class StepRecord:
    """Per-step diagnostics; violation fields are None when search is off."""

    t: int
    first_violation: float | None
    pool_violation: float | None
    refined_violation: float | None
    rounds: int
    committed: int
    masked_after: tuple[int, ...] | None = None


SampleTrace = tuple[StepRecord, ...]


def sample(instance: Instance, denoiser: Denoiser, schedule: NoiseSchedule,
           config: SearchConfig, rng: np.random.Generator,
           collect_masks: bool = False) -> tuple[np.ndarray, SampleTrace]:
    """Run the full reverse chain and return the clean sequence plus trace.

    Placement ``off`` uses the plain reverse step driven by the raw
    denoiser output; the other placements route every step through the
    search operator and the guided kernel. The final step always commits
    every remaining masked position, so the result has no masks.
    """
    if denoiser.vocab.size != instance.vocab.size:
        raise ConfigError("denoiser and instance disagree on the alphabet")
    if config.weights is not None:
        resolve_weights(config.weights, instance.constraints)
    vocab = instance.vocab
    x = fully_masked(instance.length, instance.region, vocab.mask_id,
                     instance.frozen_values)
    records = []
    for t in range(schedule.steps, 0, -1):
        masked_before = int(masked_positions(x, vocab.mask_id).size)
        try:
            if config.placement == "off":
                if masked_before:
                    rows = denoiser.denoise(x, t)
                    x = vanilla_reverse_step(x, rows, t, schedule, rng, vocab)
                first = pool = refined = None
                rounds = 0
            else:
                rows = denoiser.denoise(x, t)
                outcome = search_step(rows, x, t, config, instance, rng)
                x = guided_reverse_step(x, outcome.candidate, t, schedule, rng,
                                        vocab.mask_id)
                first, pool = outcome.first_total, outcome.pool_total
                refined, rounds = outcome.report.total, outcome.rounds
        except Exception as exc:
            raise SampleError(f"{instance.name}: step t={t} failed: {exc}") from exc
        masked_now = masked_positions(x, vocab.mask_id)
        records.append(StepRecord(
            t=t,
            first_violation=first,
            pool_violation=pool,
            refined_violation=refined,
            rounds=rounds,
            committed=masked_before - int(masked_now.size),
            masked_after=tuple(int(p) for p in masked_now) if collect_masks else None,
        ))
    return x, tuple(records)
