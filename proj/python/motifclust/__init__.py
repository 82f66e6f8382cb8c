"""Bayesian clustering of transcription factor motif count matrices."""

from ._core import (
    ParseError,
    cluster,
    consensus,
    log_dm_column,
    log_partition_prior,
    parse_motifs,
    simulate_partitions,
)

__all__ = [
    "ParseError",
    "cluster",
    "consensus",
    "log_dm_column",
    "log_partition_prior",
    "parse_motifs",
    "simulate_partitions",
]
