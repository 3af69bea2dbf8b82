"""Protein sequences as walk images, a dropout classifier and MC dropout statistics."""

from ._core import (
    RESIDUES,
    DataError,
    Network,
    ProteinSequence,
    WalkStep,
    angle_degrees,
    binary_entropy,
    categorize,
    color,
    compute_metrics,
    displacement,
    encode,
    encode_corpus,
    expectation,
    f1_score,
    find_equilibrium_delta,
    histogram,
    load_manifest,
    parse_fasta,
    read_png,
    report_from_predictions,
    trace_walk,
    variance,
    variance_moment_form,
    write_png,
)

__all__ = [
    "RESIDUES",
    "DataError",
    "Network",
    "ProteinSequence",
    "WalkStep",
    "angle_degrees",
    "binary_entropy",
    "categorize",
    "color",
    "compute_metrics",
    "displacement",
    "encode",
    "encode_corpus",
    "expectation",
    "f1_score",
    "find_equilibrium_delta",
    "histogram",
    "load_manifest",
    "parse_fasta",
    "read_png",
    "report_from_predictions",
    "trace_walk",
    "variance",
    "variance_moment_form",
    "write_png",
]
