"""Blind catalytic quantum error correction at the density-matrix level."""

from .estimators import EstimatorSpec, estimate, estimate_channel_inversion, estimate_coherence_max
from .linalg import fidelity, psd_project, trace_distance
from .noise import NoiseParams, apply_combined
from .recovery import evaluate, recover

__version__ = "0.1.0"

__all__ = [
    "EstimatorSpec",
    "NoiseParams",
    "apply_combined",
    "estimate",
    "estimate_channel_inversion",
    "estimate_coherence_max",
    "evaluate",
    "fidelity",
    "psd_project",
    "recover",
    "trace_distance",
]
