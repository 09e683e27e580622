"""Physical parameters, reservoir bookkeeping and state-dependent rates.

Everything downstream (analytics, the three simulation engines and the
master-equation oracle) consumes the same ``ModelParams`` and the rate
functions defined here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import units


class UnphysicalParameterError(ValueError):
    """Parameter combination with no physical steady state."""


class FrozenStateError(RuntimeError):
    """Every stochastic channel has zero rate; the state cannot evolve."""


@dataclass(frozen=True)
class ModelParams:
    """Model constants in internal units (rates in B12*M_tot, energies in k_B T).

    Parameters
    ----------
    b12 : absorption Einstein coefficient per molecule [1/tau0]; b12*m_tot == 1.
    m_tot : total number of dye molecules.
    delta : cavity-dye detuning [k_B T].
    temperature : k_B*T/hbar [1/tau0]; bridges energy and rate units.
    u : Kerr shift per photon [k_B T].
    kappa : cavity loss rate [1/tau0].
    w_up, w_down : molecular density-of-states weights.
    n_bar : target mean photon number (sets the pump rate kappa*n_bar).
    delta_prime : rotating-frame detuning [k_B T]; None selects -u*n_bar
        (no phase rotation on average).
    ks_side : which Einstein coefficient carries the thermal frequency
        dependence; only the emission convention is used by the engines,
        the flag exists for the decay-rate invariance check.
    trap_frequency_hz : documentation-only metadata, no dynamical role.
    """

    b12: float
    m_tot: int
    delta: float
    temperature: float
    u: float
    kappa: float
    w_up: float = 1.0
    w_down: float = 1.0
    n_bar: float = 0.0
    delta_prime: float | None = None
    ks_side: str = "emission"
    trap_frequency_hz: float | None = None

    def __post_init__(self):
        if not (self.b12 > 0):
            raise UnphysicalParameterError("b12 must be positive")
        if self.m_tot < 1:
            raise UnphysicalParameterError("m_tot must be at least 1")
        if not (self.temperature > 0):
            raise UnphysicalParameterError("temperature must be positive")
        if self.kappa < 0 or self.u < 0 or self.n_bar < 0:
            raise UnphysicalParameterError("kappa, u and n_bar must be nonnegative")
        if not (self.w_up > 0 and self.w_down > 0):
            raise UnphysicalParameterError("density-of-states weights must be positive")
        if abs(self.b12 * self.m_tot - 1.0) > 1e-9:
            raise UnphysicalParameterError(
                "internal units require b12*m_tot == 1 (got %g)" % (self.b12 * self.m_tot)
            )
        if self.ks_side not in ("emission", "absorption"):
            raise UnphysicalParameterError("ks_side must be 'emission' or 'absorption'")

    # -- derived quantities ------------------------------------------------

    @property
    def u_rate(self) -> float:
        """Kerr phase-rotation speed per photon [rad/tau0]."""
        return self.u * self.temperature

    @property
    def delta_prime_value(self) -> float:
        """Rotating-frame detuning [k_B T], resolving the default."""
        if self.delta_prime is None:
            return -self.u * self.n_bar
        return self.delta_prime

    @property
    def delta_prime_rate(self) -> float:
        """Rotating-frame detuning as a phase speed [rad/tau0]."""
        return self.delta_prime_value * self.temperature

    def with_(self, **kwargs) -> "ModelParams":
        return replace(self, **kwargs)

    # -- SI mirror ----------------------------------------------------------

    @classmethod
    def from_si(
        cls,
        b12_hz: float,
        m_tot: int,
        delta_kt: float,
        temperature_k: float,
        u_b12mtot: float,
        kappa_b12mtot: float,
        w_up: float = 1.0,
        w_down: float = 1.0,
        n_bar: float = 0.0,
        delta_prime_kt: float | None = None,
        ks_side: str = "emission",
        trap_frequency_hz: float | None = None,
    ) -> "ModelParams":
        """Build internal parameters from laboratory-style values.

        ``delta_kt`` is the detuning over k_B T, ``u_b12mtot`` and
        ``kappa_b12mtot`` are quoted relative to B12*M_tot (the native
        scales of the experiment tables).
        """
        t_rate = units.temperature_rate(temperature_k, b12_hz, m_tot)
        return cls(
            b12=1.0 / m_tot,
            m_tot=int(m_tot),
            delta=delta_kt,
            temperature=t_rate,
            u=u_b12mtot / t_rate,
            kappa=kappa_b12mtot,
            w_up=w_up,
            w_down=w_down,
            n_bar=n_bar,
            delta_prime=delta_prime_kt,
            ks_side=ks_side,
            trap_frequency_hz=trap_frequency_hz,
        )

    def to_si(self, b12_hz: float) -> dict:
        """Express the parameters in the laboratory units of ``from_si``."""
        scale = b12_hz * self.m_tot
        temperature_k = self.temperature * units.HBAR * scale / units.K_B
        return {
            "b12_hz": b12_hz,
            "m_tot": self.m_tot,
            "delta_kt": self.delta,
            "temperature_k": temperature_k,
            "u_b12mtot": self.u * self.temperature,
            "kappa_b12mtot": self.kappa,
            "w_up": self.w_up,
            "w_down": self.w_down,
            "n_bar": self.n_bar,
            "delta_prime_kt": self.delta_prime,
            "tau0_s": 1.0 / scale,
        }


@dataclass
class ReservoirState:
    """Occupation of the molecular reservoir plus the excitation ledger."""

    m_up: float
    m_down: float
    x: float

    @classmethod
    def from_photons(cls, params: ModelParams, m_up: float, n: float) -> "ReservoirState":
        return cls(m_up=m_up, m_down=params.m_tot - m_up, x=m_up + n)

    def check(self, params: ModelParams, n: float, integer: bool = False, tol: float = 1e-9):
        if abs(self.m_up + self.m_down - params.m_tot) > tol * params.m_tot:
            raise UnphysicalParameterError("reservoir occupations do not add up to m_tot")
        if abs(self.x - (self.m_up + n)) > tol * max(1.0, self.x):
            raise UnphysicalParameterError("excitation ledger x != m_up + n")
        if self.m_up < 0 or self.m_down < 0:
            raise UnphysicalParameterError("negative molecular occupation")
        if integer and self.m_up != round(self.m_up):
            raise UnphysicalParameterError("m_up must be integer-valued in this engine")


# -- rate functions ---------------------------------------------------------


def kennard_stepanov_ratio(params: ModelParams, n: float) -> float:
    """Thermal emission/absorption coefficient ratio B21(n)/B12 at continuous n."""
    return (params.w_down / params.w_up) * math.exp(-(params.delta + params.u * n))


def emission_rate(params: ModelParams, res: ReservoirState, n: float) -> float:
    """Total molecular emission rate R = B21(n)*M_up [1/tau0]."""
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    return params.b12 * kennard_stepanov_ratio(params, n) * res.m_up


def absorption_rate(params: ModelParams, res: ReservoirState) -> float:
    """Total molecular absorption rate gamma = B12*M_down [1/tau0]."""
    if res.m_down < 0:
        raise ValueError("m_down must be nonnegative")
    return params.b12 * res.m_down


def emission_coefficient_step(params: ModelParams, n: float) -> float:
    """Emission coefficient B21 for the n -> n+1 transition [1/tau0 per molecule].

    Evaluated at n + 1/2 so the Boltzmann factor carries exactly the Kerr
    energy difference E(n+1) - E(n) of E(n) = delta*n + (u/2)*n^2; the
    birth-death steady state then telescopes to the closed-form
    detailed-balance distribution at any interaction strength.
    """
    return params.b12 * kennard_stepanov_ratio(params, n + 0.5)


def effective_reservoir_size(params: ModelParams, n_bar: float) -> float:
    """Reservoir size governing the canonical/grand-canonical crossover."""
    if n_bar < 0:
        raise ValueError("n_bar must be nonnegative")
    return params.m_tot / 2.0 / (1.0 + math.cosh(params.delta + params.u * n_bar))


def interaction_parameter(params: ModelParams, n_bar: float) -> float:
    """Dimensionless Kerr strength sigma = U*n_bar^2/(k_B T)."""
    return params.u * n_bar * n_bar


def excitation_number(params: ModelParams, n_bar: float, eta: float) -> tuple[float, float]:
    """Steady-state total excitation X and excited-molecule number M_up.

    Includes the fluctuation correction proportional to eta^2 = Var[n]/n_bar^2,
    which matters once the reservoir saturates.  Used to initialize every
    simulation engine.
    """
    if n_bar <= 0:
        raise ValueError("n_bar must be positive")
    if not (0.0 <= eta <= 1.2):
        raise ValueError("eta outside the physically sensible range [0, 1.2]")
    b21 = params.b12 * kennard_stepanov_ratio(params, n_bar)
    eta2n2 = eta * eta * n_bar * n_bar
    num = (params.b12 * params.m_tot + params.kappa) * n_bar + (params.b12 + b21) * eta2n2
    den = b21 * (n_bar + 1.0 - params.u * eta2n2) + params.b12 * n_bar
    if den <= 0:
        raise UnphysicalParameterError(
            "no stationary reservoir occupation: denominator %g <= 0 "
            "(interactions too strong for this n_bar/eta)" % den
        )
    m_up = num / den
    return m_up + n_bar, m_up


def number_relaxation_rate(params: ModelParams, n_bar: float, eta: float, side: str | None = None) -> float:
    """Photon-number relaxation rate from linearizing the mean drift at n_bar.

    The thermal frequency dependence can be assigned to the emission or to
    the absorption coefficient (``side``); both give the same rate up to
    O(1/n_bar), which is what the closed-form expression in
    :func:`pcl.analytics.gamma2` summarizes.
    """
    side = side or params.ks_side
    x, _ = excitation_number(params, n_bar, eta)

    def drift(n):
        m_up = x - n
        m_down = params.m_tot - m_up
        if side == "emission":
            b21 = params.b12 * kennard_stepanov_ratio(params, n)
            b12 = params.b12
        else:
            b21 = params.b12 * kennard_stepanov_ratio(params, n_bar)
            b12 = params.b12 * math.exp(params.u * (n - n_bar))
        return b21 * m_up * (1.0 + n) - b12 * m_down * n - params.kappa * n

    h = max(1.0, 1e-6 * n_bar)
    return -(drift(n_bar + h) - drift(n_bar - h)) / (2.0 * h)
