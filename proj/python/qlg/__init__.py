"""Python access to the qlg core."""

from ._qlg import (
    ConfigError,
    DivisorConfig,
    __version__,
    c_delta,
    delta_kernel,
    delta_kernel_mass,
    in_A_eta,
    phi_st,
    resonance_lines,
    single_mode_ratio,
    split_momentum,
)

__all__ = [
    "ConfigError",
    "DivisorConfig",
    "__version__",
    "c_delta",
    "delta_kernel",
    "delta_kernel_mass",
    "in_A_eta",
    "phi_st",
    "resonance_lines",
    "single_mode_ratio",
    "split_momentum",
]
