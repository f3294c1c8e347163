"""Denoiser interface and exact desk-scale implementations.

A denoiser maps a partially masked sequence to an ``(L, |V|)`` row-stochastic
matrix over clean tokens: the mask id receives no probability mass, and rows
at unmasked positions are one-hot on the observed token. All implementations
here ignore the step index ``t``: conditioning on the observed tokens fully
determines the posterior of the absorbing process, so ``t`` is carried only
for interface compatibility with learned models.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, ContractError, DenoiserContractError, ParseError
from .vocab import Vocab

ROW_TOL = 1e-9


def check_rows(rows: np.ndarray, values: np.ndarray, vocab: Vocab) -> np.ndarray:
    """Validate denoiser output against its contract; returns the array.

    Checks shape, finiteness, non-negativity, row normalization within
    ``ROW_TOL``, and one-hot consistency with the observed tokens.
    """
    rows = np.asarray(rows, dtype=np.float64)
    values = np.asarray(values)
    if rows.shape != (len(values), vocab.size):
        raise DenoiserContractError(
            f"rows have shape {rows.shape}, expected ({len(values)}, {vocab.size})")
    if not np.all(np.isfinite(rows)):
        raise DenoiserContractError("rows contain non-finite entries")
    if np.any(rows < -ROW_TOL):
        raise DenoiserContractError("rows contain negative probabilities")
    sums = rows.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > ROW_TOL):
        raise DenoiserContractError("rows are not normalized")
    observed = np.flatnonzero(values != vocab.mask_id)
    if observed.size and np.any(rows[observed, values[observed]] < 1.0 - ROW_TOL):
        raise DenoiserContractError("rows at unmasked positions must be one-hot")
    return rows


def _uniform_rows(values: np.ndarray, vocab: Vocab) -> np.ndarray:
    rows = np.full((len(values), vocab.size), 1.0 / vocab.size)
    return _clamp_observed(rows, values, vocab)


def _clamp_observed(rows: np.ndarray, values: np.ndarray, vocab: Vocab) -> np.ndarray:
    observed = np.flatnonzero(np.asarray(values) != vocab.mask_id)
    if observed.size:
        rows[observed] = 0.0
        rows[observed, np.asarray(values)[observed]] = 1.0
    return rows


class Denoiser:
    """Interface: deterministic map from (sequence, step) to token rows."""

    def __init__(self, vocab: Vocab):
        self.vocab = vocab

    def denoise(self, values: np.ndarray, t: int) -> np.ndarray:
        raise NotImplementedError


class UniformDenoiser(Denoiser):
    """Uninformed proposals: uniform rows at masked positions."""

    def denoise(self, values, t):
        return _uniform_rows(values, self.vocab)


class DataDistribution:
    """Finite weighted support of fully specified sequences.

    Stands in for the unknown data distribution at desk scale. Arrays are
    made read-only so instances can be shared across sampler threads.
    """

    def __init__(self, support: np.ndarray, weights: np.ndarray | None = None):
        support = np.array(support, dtype=np.int64)
        if support.ndim != 2 or support.shape[0] == 0:
            raise ConfigError("support must be a non-empty (S, L) array")
        if weights is None:
            weights = np.full(support.shape[0], 1.0 / support.shape[0])
        else:
            weights = np.array(weights, dtype=np.float64)
            if weights.shape != (support.shape[0],):
                raise ConfigError("weights must align with the support")
            if np.any(weights <= 0):
                raise ConfigError("weights must be positive")
            weights = weights / weights.sum()
        support.setflags(write=False)
        weights.setflags(write=False)
        self.support = support
        self.weights = weights

    @property
    def length(self) -> int:
        return self.support.shape[1]


def exact_posterior(dist: DataDistribution, values: np.ndarray,
                    vocab: Vocab) -> np.ndarray:
    """Exact per-position marginals conditioned on the observed tokens.

    Row ``i`` is the marginal of the support at position ``i`` restricted to
    elements agreeing with every unmasked position of ``values``. When no
    support element is consistent (search edits can leave the support), the
    masked rows fall back to uniform so sampling can proceed.
    """
    values = np.asarray(values)
    if len(values) != dist.length:
        raise ContractError(
            f"sequence length {len(values)} != support length {dist.length}")
    if np.any(dist.support >= vocab.size):
        raise ConfigError("support contains values outside the alphabet")
    observed = np.flatnonzero(values != vocab.mask_id)
    consistent = np.all(dist.support[:, observed] == values[observed], axis=1)
    if not consistent.any():
        return _uniform_rows(values, vocab)
    sub = dist.support[consistent]
    w = dist.weights[consistent]
    rows = np.zeros((dist.length, vocab.size))
    for i in range(dist.length):
        np.add.at(rows[i], sub[:, i], w)
    rows /= rows.sum(axis=1, keepdims=True)
    return _clamp_observed(rows, values, vocab)


class ExactPosteriorDenoiser(Denoiser):
    """Denoiser backed by exact enumeration over a finite support."""

    def __init__(self, dist: DataDistribution, vocab: Vocab):
        super().__init__(vocab)
        if np.any(dist.support >= vocab.size) or np.any(dist.support < 0):
            raise ConfigError("support contains values outside the alphabet")
        self.dist = dist

    def denoise(self, values, t):
        return exact_posterior(self.dist, values, self.vocab)


class CorruptedDenoiser(Denoiser):
    """Mixture of a base denoiser with uniform noise at masked positions.

    Simulates an imperfect model so that search has violations to repair;
    observed positions are re-clamped to one-hot after mixing.
    """

    def __init__(self, base: Denoiser, epsilon: float):
        super().__init__(base.vocab)
        self.base = base
        self.epsilon = epsilon

    def denoise(self, values, t):
        rows = np.array(self.base.denoise(values, t), dtype=np.float64)
        rows = (1.0 - self.epsilon) * rows + self.epsilon / self.vocab.size
        return _clamp_observed(rows, values, self.vocab)


def corrupt(base: Denoiser, epsilon: float) -> Denoiser:
    """Blend ``base`` with uniform noise: ``(1-eps) * base + eps * uniform``."""
    if not 0.0 <= epsilon <= 1.0:
        raise ConfigError(f"mixing weight {epsilon} outside [0, 1]")
    return CorruptedDenoiser(base, epsilon)


class TableDenoiser(Denoiser):
    """Denoiser whose rows are looked up from a text table.

    Keys are the rendered query sequence (``?`` marks masks); unlisted keys
    or positions fall back to uniform. Observed positions are clamped.
    """

    def __init__(self, vocab: Vocab, table: dict[str, dict[int, np.ndarray]]):
        super().__init__(vocab)
        self.table = table

    def denoise(self, values, t):
        rows = _uniform_rows(values, self.vocab)
        entry = self.table.get(self.vocab.render(values))
        if entry:
            for pos, row in entry.items():
                if pos < len(values):
                    rows[pos] = row
        return _clamp_observed(rows, values, self.vocab)


def load_table(path, vocab: Vocab) -> TableDenoiser:
    """Parse a denoiser table file.

    One record per line: ``pattern<TAB>pos<TAB>p_0,p_1,...`` where the
    pattern uses vocabulary symbols with ``?`` for masks. ``#`` starts a
    comment. Rows must be stochastic; duplicate keys are rejected.
    """
    if any(len(s) != 1 for s in vocab.symbols):
        raise ConfigError("table patterns require single-character symbols")
    table: dict[str, dict[int, np.ndarray]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError("expected pattern<TAB>pos<TAB>probs", line_no)
            pattern, pos_text, probs_text = parts
            try:
                vocab.parse(pattern)
            except (ContractError, ConfigError) as exc:
                raise ParseError(str(exc), line_no) from None
            try:
                pos = int(pos_text)
            except ValueError:
                raise ParseError(f"bad position {pos_text!r}", line_no) from None
            if pos < 0 or pos >= len(pattern):
                raise ParseError(f"position {pos} outside pattern", line_no)
            try:
                row = np.array([float(x) for x in probs_text.split(",")])
            except ValueError:
                raise ParseError("bad probability value", line_no) from None
            if row.shape != (vocab.size,):
                raise ParseError(
                    f"expected {vocab.size} probabilities, got {row.size}", line_no)
            if np.any(row < 0) or abs(row.sum() - 1.0) > ROW_TOL:
                raise ParseError("row is not a probability distribution", line_no)
            if pos in table.get(pattern, {}):
                raise ParseError(f"duplicate entry for {pattern!r} position {pos}", line_no)
            table.setdefault(pattern, {})[pos] = row
    return TableDenoiser(vocab, table)
