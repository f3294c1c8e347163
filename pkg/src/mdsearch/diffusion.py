"""Absorbing noise schedule and the forward/reverse step kernels.

The forward process independently replaces tokens with the mask id; a token
survives unmasked through step ``t`` with probability ``alpha_t``. Reverse
steps unmask: a masked position either keeps its mask (weight ``stay_prob``)
or commits a clean token (weight ``commit_prob``), with the two weights
summing to one at every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .denoise import ROW_TOL
from .errors import ConfigError, ContractError, DenoiserContractError
from .vocab import EditableRegion, Vocab, masked_positions


@dataclass(frozen=True)
class NoiseSchedule:
    """Survival probabilities ``alphas[0..T]`` with fixed endpoints 1 and 0."""

    alphas: tuple[float, ...]

    def __post_init__(self):
        a = self.alphas
        if len(a) < 2:
            raise ConfigError("schedule needs at least one step")
        if a[0] != 1.0 or a[-1] != 0.0:
            raise ConfigError("schedule must start at 1 and end at 0")
        if any(not (0.0 <= x <= 1.0) for x in a):
            raise ConfigError("survival probabilities must lie in [0, 1]")
        if any(a[i + 1] >= a[i] for i in range(len(a) - 1)):
            raise ConfigError("schedule must be strictly decreasing")

    @property
    def steps(self) -> int:
        return len(self.alphas) - 1

    def alpha(self, t: int) -> float:
        if not 0 <= t <= self.steps:
            raise ContractError(f"step {t} outside schedule range 0..{self.steps}")
        return self.alphas[t]


def linear_schedule(steps: int) -> NoiseSchedule:
    """Schedule with survival falling linearly from 1 to 0 over ``steps``."""
    if steps < 1:
        raise ConfigError("step count must be at least 1")
    return NoiseSchedule(tuple(1.0 - t / steps for t in range(steps + 1)))


class ReverseCoeffs(NamedTuple):
    """Mixture weights of a reverse step at a masked position."""

    stay_prob: float
    commit_prob: float


def reverse_coeffs(t: int, schedule: NoiseSchedule) -> ReverseCoeffs:
    """Weights for staying masked vs committing a token when moving t -> t-1.

    ``stay_prob = (1 - alpha_{t-1}) / (1 - alpha_t)`` and
    ``commit_prob = (alpha_{t-1} - alpha_t) / (1 - alpha_t)``; they sum to
    one, and the final step (t=1) always commits because ``alpha_0 = 1``.
    """
    if not 1 <= t <= schedule.steps:
        raise ContractError(f"step {t} outside reverse range 1..{schedule.steps}")
    a_prev = schedule.alpha(t - 1)
    a_t = schedule.alpha(t)
    denom = 1.0 - a_t
    return ReverseCoeffs((1.0 - a_prev) / denom, (a_prev - a_t) / denom)


def sample_rows(rows: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One categorical draw per row via inverse CDF, one uniform per row."""
    rows = np.asarray(rows, dtype=np.float64)
    cdf = np.cumsum(rows, axis=1)
    u = rng.random(rows.shape[0]) * cdf[:, -1]
    idx = (cdf <= u[:, None]).sum(axis=1)
    return np.minimum(idx, rows.shape[1] - 1).astype(np.int64)


def forward_corrupt(values: np.ndarray, t: int, schedule: NoiseSchedule,
                    region: EditableRegion, rng: np.random.Generator,
                    mask_id: int) -> np.ndarray:
    """Corrupt a clean sequence to its step-``t`` marginal.

    Each editable token is kept with probability ``alpha_t``, otherwise
    replaced by the mask id. Frozen positions are never touched. This is a
    test/diagnostic utility, not part of the sampling loop.
    """
    values = np.asarray(values)
    if not 0 <= t <= schedule.steps:
        raise ContractError(f"step {t} outside schedule range 0..{schedule.steps}")
    editable = np.array(region.positions, dtype=np.int64)
    if editable.size and np.any(values[editable] == mask_id):
        raise ContractError("input must be fully specified on the editable region")
    out = np.array(values, dtype=np.int64)
    if editable.size:
        survive = rng.random(editable.size) < schedule.alpha(t)
        out[editable[~survive]] = mask_id
    return out


def vanilla_reverse_step(x_t: np.ndarray, rows: np.ndarray, t: int,
                         schedule: NoiseSchedule, rng: np.random.Generator,
                         vocab: Vocab) -> np.ndarray:
    """Plain reverse transition driven directly by the denoiser output.

    Unmasked positions carry over unchanged. Each masked position stays
    masked with probability ``stay_prob``, otherwise draws a token from the
    denoiser's categorical at that position. Only the rows actually sampled
    from (the masked subset) are validated here; ``check_rows`` offers the
    full output check.
    """
    x_t = np.asarray(x_t)
    rows = np.asarray(rows, dtype=np.float64)
    if rows.shape != (len(x_t), vocab.size):
        raise DenoiserContractError(
            f"rows have shape {rows.shape}, expected ({len(x_t)}, {vocab.size})")
    coeffs = reverse_coeffs(t, schedule)
    out = np.array(x_t, dtype=np.int64)
    masked = masked_positions(x_t, vocab.mask_id)
    if masked.size:
        sub = rows[masked]
        if (np.any(np.abs(sub.sum(axis=1) - 1.0) > ROW_TOL)
                or np.any(sub < -ROW_TOL) or not np.all(np.isfinite(sub))):
            raise DenoiserContractError("denoiser rows at masked positions are invalid")
        commit = rng.random(masked.size) < coeffs.commit_prob
        chosen = masked[commit]
        if chosen.size:
            out[chosen] = sample_rows(sub[commit], rng)
    return out


def guided_reverse_step(x_t: np.ndarray, refined: np.ndarray, t: int,
                        schedule: NoiseSchedule, rng: np.random.Generator,
                        mask_id: int) -> np.ndarray:
    """Reverse transition committing toward a search-refined candidate.

    Positions already unmasked in ``x_t`` are set to the refined candidate's
    value deterministically (search may have revised them). Masked positions
    unmask to the refined value with probability ``commit_prob`` and keep
    the mask otherwise.
    """
    x_t = np.asarray(x_t)
    refined = np.asarray(refined)
    if refined.shape != x_t.shape:
        raise ContractError("refined candidate and latent state differ in length")
    if np.any(refined == mask_id):
        raise ContractError("refined candidate must be fully specified")
    coeffs = reverse_coeffs(t, schedule)
    out = np.array(refined, dtype=np.int64)
    masked = masked_positions(x_t, mask_id)
    if masked.size:
        stay = masked[rng.random(masked.size) >= coeffs.commit_prob]
        out[stay] = mask_id
    return out
