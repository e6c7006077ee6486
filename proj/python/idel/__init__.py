"""Disentangled text representations via mutual-information bounds."""

from ._core import (
    CapacityError,
    ConfigError,
    ContractError,
    DivergenceError,
    DomainError,
    Model,
    ba_lower_bound,
    club_full,
    club_stochastic,
    corpus_bleu,
    corpus_bleu_multi,
    energy_distance,
    gaussian_mi,
    geometric_mean,
    mad,
    make_corpus,
    mmd,
    mutual_information,
    run_command,
    sample_gaussian_pairs,
    self_bleu,
    variation_of_information,
    wasserstein,
)

__all__ = [name for name in dir() if not name.startswith("_")]
