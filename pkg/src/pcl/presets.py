"""Built-in parameter sets for the dye-microcavity experiments."""

from __future__ import annotations

import math

from .model import ModelParams

#: laboratory values behind the built-in preset
RHODAMINE_B12_HZ = 2.5e3
RHODAMINE_M_TOT = 10**9
RHODAMINE_TEMPERATURE_K = 300.0
RHODAMINE_DELTA_KT = -2.4
RHODAMINE_U_B12MTOT = 1e-5
RHODAMINE_KAPPA_B12MTOT = 8.3e-4
RHODAMINE_N_BAR = 1000.0
RHODAMINE_TRAP_HZ = 8.0 * math.pi * 1e10


def rhodamine6g_560nm(
    interacting: bool = True,
    lossless: bool = False,
    m_tot: int | None = None,
    n_bar: float | None = None,
) -> ModelParams:
    """Rhodamine 6G dye at 560 nm.

    ``interacting=False`` zeroes the Kerr constant, ``lossless=True`` zeroes
    the cavity loss; both toggles leave everything else untouched.  ``m_tot``
    can be overridden for reservoir-size sweeps at fixed n_bar.
    """
    return ModelParams.from_si(
        b12_hz=RHODAMINE_B12_HZ,
        m_tot=int(m_tot if m_tot is not None else RHODAMINE_M_TOT),
        delta_kt=RHODAMINE_DELTA_KT,
        temperature_k=RHODAMINE_TEMPERATURE_K,
        u_b12mtot=RHODAMINE_U_B12MTOT if interacting else 0.0,
        kappa_b12mtot=0.0 if lossless else RHODAMINE_KAPPA_B12MTOT,
        n_bar=n_bar if n_bar is not None else RHODAMINE_N_BAR,
        trap_frequency_hz=RHODAMINE_TRAP_HZ,
    )


def small_reservoir(x: int = 10, m_tot: int = 10**4, kappa: float = 0.0) -> tuple[ModelParams, int]:
    """Tiny fixed-excitation instance where the master equation is exactly solvable.

    Returns the parameter set and the total excitation number X.
    """
    params = ModelParams.from_si(
        b12_hz=RHODAMINE_B12_HZ,
        m_tot=m_tot,
        delta_kt=RHODAMINE_DELTA_KT,
        temperature_k=RHODAMINE_TEMPERATURE_K,
        u_b12mtot=0.0,
        kappa_b12mtot=kappa,
        n_bar=0.0,
    )
    return params, x


MODEL_PRESETS = {
    "rhodamine6g-560nm": rhodamine6g_560nm,
}


def model_preset(name: str) -> ModelParams:
    if name not in MODEL_PRESETS:
        raise KeyError(f"unknown model preset {name!r}; available: {sorted(MODEL_PRESETS)}")
    return MODEL_PRESETS[name]()
