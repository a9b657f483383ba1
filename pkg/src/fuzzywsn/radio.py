"""First-order radio energy model.

Transmitting ``k`` bits over ``d`` meters costs ``E_elec*k`` for the
electronics plus an amplifier term that is ``eps_fs*k*d**2`` below the
crossover distance ``d0 = sqrt(eps_fs/eps_amp)`` and ``eps_amp*k*d**4`` at
or beyond it. Receiving costs ``E_elec*k``. All energies are joules.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RadioParams:
    e_elec: float = 50e-9
    eps_fs: float = 10e-12
    eps_amp: float = 0.0013e-12
    e_da: float = 5e-9
    data_bits: int = 4000
    info_bits: int = 100

    def __post_init__(self):
        for name in ("e_elec", "eps_fs", "eps_amp", "e_da", "data_bits", "info_bits"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"radio parameter {name} must be positive, got {value}")

    @property
    def d0(self) -> float:
        return threshold_d0(self)


def threshold_d0(params: RadioParams) -> float:
    return math.sqrt(params.eps_fs / params.eps_amp)


def amplifier_energy(params: RadioParams, k, d):
    """Amplifier part of a transmission; scalar or array ``d``."""
    if isinstance(d, (float, int)):
        d2 = d * d
        return params.eps_fs * k * d2 if d < params.d0 else params.eps_amp * k * (d2 * d2)
    d = np.asarray(d, dtype=np.float64)
    d2 = d * d
    out = np.where(d < params.d0, params.eps_fs * k * d2, params.eps_amp * k * (d2 * d2))
    return float(out) if out.ndim == 0 else out


def tx_energy(params: RadioParams, k, d):
    """Energy to send ``k`` bits over ``d`` meters; scalar or array ``d``."""
    return params.e_elec * k + amplifier_energy(params, k, d)


def rx_energy(params: RadioParams, k) -> float:
    return params.e_elec * k


def aggregation_energy(params: RadioParams, k, n_signals) -> float:
    return params.e_da * k * n_signals
