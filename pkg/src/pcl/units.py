"""Unit conventions and SI conversions.

Internal convention used everywhere in this package:

* time unit tau0 = 1/(B12*M_tot); every rate (b12, kappa, emission and
  absorption rates, correlation decay rates) is stored in 1/tau0,
* energy-like quantities (detuning, Kerr shift per photon) are stored as
  dimensionless multiples of k_B*T,
* ``temperature`` is the single bridge between the two: k_B*T/hbar
  expressed in 1/tau0.

With that, thermal exponents are simply exp(-(delta + u*n)) and a Kerr
phase speed in rad/tau0 is u*temperature*n.
"""

K_B = 1.380649e-23  # J/K
HBAR = 1.054571817e-34  # J s


def temperature_rate(temperature_k: float, b12_hz: float, m_tot: float) -> float:
    """k_B*T/hbar converted to units of B12*M_tot."""
    return K_B * temperature_k / HBAR / (b12_hz * m_tot)


def rate_to_hz(rate_internal: float, b12_hz: float, m_tot: float) -> float:
    return rate_internal * b12_hz * m_tot


def hz_to_rate(rate_hz: float, b12_hz: float, m_tot: float) -> float:
    return rate_hz / (b12_hz * m_tot)


def tau0_seconds(b12_hz: float, m_tot: float) -> float:
    return 1.0 / (b12_hz * m_tot)
