"""Constraint-guided sampling for masked discrete diffusion.

The sampler runs an absorbing-state reverse chain whose every step may pass
through a violation-minimizing search operator (best-of-pool proposal
selection plus greedy single-edit refinement) before tokens commit. Exact
enumeration denoisers stand in for trained models so the behavior is fully
checkable at desk scale.
"""

from .denoise import (
    DataDistribution,
    Denoiser,
    ExactPosteriorDenoiser,
    TableDenoiser,
    UniformDenoiser,
    corrupt,
    exact_posterior,
    load_table,
)
from .diffusion import (
    NoiseSchedule,
    ReverseCoeffs,
    forward_corrupt,
    guided_reverse_step,
    linear_schedule,
    reverse_coeffs,
    vanilla_reverse_step,
)
from .search import (
    SearchConfig,
    StepRecord,
    aggregate_violation,
    best_of_pool,
    neighborhood,
    proposal_draws,
    refine,
    sample,
    search_step,
)
from .tasks import (
    Instance,
    build_denoiser,
    exact_distribution,
    peptide_instance,
    sat_instance,
    sudoku_instance,
)
from .vocab import EditableRegion, Vocab, apply_edit, fully_masked, masked_positions

__version__ = "0.1.0"

__all__ = [
    "DataDistribution",
    "Denoiser",
    "ExactPosteriorDenoiser",
    "TableDenoiser",
    "UniformDenoiser",
    "corrupt",
    "exact_posterior",
    "load_table",
    "NoiseSchedule",
    "ReverseCoeffs",
    "forward_corrupt",
    "guided_reverse_step",
    "linear_schedule",
    "reverse_coeffs",
    "vanilla_reverse_step",
    "SearchConfig",
    "StepRecord",
    "aggregate_violation",
    "best_of_pool",
    "neighborhood",
    "proposal_draws",
    "refine",
    "sample",
    "search_step",
    "Instance",
    "build_denoiser",
    "exact_distribution",
    "peptide_instance",
    "sat_instance",
    "sudoku_instance",
    "EditableRegion",
    "Vocab",
    "apply_edit",
    "fully_masked",
    "masked_positions",
]
