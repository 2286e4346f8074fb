"""Synthetic markets with planted sectors, mediation chains and nonlinear pairs."""

from pminet.synth.generator import (
    ALGORITHM,
    NONLINEAR_TRANSFORMS,
    SynthResult,
    SynthSpec,
    SynthSpecError,
    generate,
)

__all__ = [
    "ALGORITHM",
    "NONLINEAR_TRANSFORMS",
    "SynthResult",
    "SynthSpec",
    "SynthSpecError",
    "generate",
]
