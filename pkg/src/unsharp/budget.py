"""Closed-form error-budget estimates, SI units throughout.

Two chains are provided:

* :func:`shelving_budget` - target ion shelved in a metastable level during the
  four-pulse preparation; spontaneous decay from that level sets ``P_sp``.
* :func:`dipole_force_budget` - far-detuned standing-wave force driving the
  weak squeezing interaction; off-resonant scattering sets ``P_sp``.

Where a printed expression is dimensionally doubtful both the printed and the
standard form are computed and returned side by side.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from scipy import constants as _sc


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values (via ``scipy.constants``)."""

    c: float = _sc.c  # 299792458 m/s, exact
    epsilon0: float = _sc.epsilon_0  # 8.8541878128e-12 F/m
    hbar: float = _sc.hbar  # 1.054571817e-34 J s
    amu: float = _sc.atomic_mass  # 1.66053906660e-27 kg


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class LaserParams:
    power: float = 5e-3  # W
    spot_radius: float = 50e-6  # m; beam area is pi * spot_radius**2
    wavelength: float = 435.5e-9  # m

    def __post_init__(self) -> None:
        for name in ("power", "spot_radius", "wavelength"):
            if not getattr(self, name) > 0:
                raise ValueError(f"laser {name} must be positive")

    @property
    def intensity(self) -> float:
        return self.power / (math.pi * self.spot_radius**2)


@dataclass(frozen=True)
class IonParams:
    mass: float  # kg
    metastable_lifetime: float | None = None  # s
    transition_omega: float | None = None  # rad/s
    lamb_dicke: float = 0.2
    stretch_mode_omega: float | None = None  # rad/s
    detuning: float | None = None  # rad/s


def _positive(**kw) -> None:
    for name, value in kw.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value!r}")


def field_strength(laser: LaserParams, consts: PhysicalConstants = CODATA) -> float:
    """Peak field ``E0 = sqrt(2 I / (c eps0))`` in V/m."""
    return math.sqrt(2.0 * laser.intensity / (consts.c * consts.epsilon0))


def angular_frequency(wavelength: float, consts: PhysicalConstants = CODATA) -> float:
    return 2.0 * math.pi * consts.c / wavelength


@dataclass(frozen=True)
class CouplingElement:
    printed: float  # sqrt(3 pi c eps0 gamma / omega^3), units as printed
    standard: float  # sqrt(3 pi eps0 hbar c^3 gamma / omega^3), C m


def quadrupole_moment(gamma_q: float, omega: float, consts: PhysicalConstants = CODATA) -> CouplingElement:
    """Coupling element from a decay rate, in both the printed and the dimensionally standard form.

    The standard form is the Einstein-A inversion ``A = omega^3 mu^2 / (3 pi eps0 hbar c^3)``.
    """
    if gamma_q < 0 or not omega > 0:
        raise ValueError("need gamma_q >= 0 and omega > 0")
    printed = math.sqrt(3 * math.pi * consts.c * consts.epsilon0 * gamma_q / omega**3)
    standard = math.sqrt(3 * math.pi * consts.epsilon0 * consts.hbar * consts.c**3 * gamma_q / omega**3)
    return CouplingElement(printed, standard)


def rsb_rabi_frequency(eta: float, mu: float, e0: float, consts: PhysicalConstants = CODATA) -> float:
    """Red-sideband coupling ``eta mu E0 / (4 hbar)`` in rad/s."""
    return eta * mu * e0 / (4.0 * consts.hbar)


def half_decay_measurements(tau_sp: float, delta_t: float) -> float:
    """Number of shelving episodes of length ``delta_t`` before survival drops to 1/2."""
    _positive(tau_sp=tau_sp, delta_t=delta_t)
    return -(tau_sp / delta_t) * math.log(0.5)


def n_half(p_sp: float) -> float:
    """Measurements before the no-emission probability falls to 1/2, given ``p_sp`` per measurement."""
    if not 0.0 <= p_sp < 1.0:
        raise ValueError("p_sp must lie in [0, 1)")
    if p_sp == 0.0:
        return math.inf
    return math.log(0.5) / math.log1p(-p_sp)


def ground_state_width(mass: float, omega_s: float, consts: PhysicalConstants = CODATA) -> float:
    """Stretch-mode ground-state width ``sqrt(hbar / (2 m omega_s))`` in m."""
    _positive(mass=mass, omega_s=omega_s)
    return math.sqrt(consts.hbar / (2.0 * mass * omega_s))


def width_from_lamb_dicke(eta: float, k_eff: float) -> float:
    """``z0 = eta / k_eff``."""
    _positive(k_eff=k_eff)
    return eta / k_eff


def standing_wave_k(wavelength: float, crossing_angle: float = math.pi / 2) -> float:
    """Effective wavenumber of two beams crossing at ``crossing_angle``: ``2 k sin(angle/2)``."""
    return 2.0 * (2.0 * math.pi / wavelength) * math.sin(crossing_angle / 2.0)


@dataclass(frozen=True)
class DipoleForce:
    stark_gradient: float  # mu^2 E0^2 k_eff / (4 hbar^2 Delta), 1/(s m)
    force: float  # hbar * stark_gradient, N


def dipole_force(mu: float, e0: float, k_eff: float, detuning: float, consts: PhysicalConstants = CODATA) -> DipoleForce:
    if detuning == 0:
        raise ValueError("detuning must be nonzero")
    grad = mu**2 * e0**2 * k_eff / (4.0 * consts.hbar**2 * detuning)
    return DipoleForce(grad, consts.hbar * grad)


def geometric_phase(f0: float, z0: float, tau_g: float, consts: PhysicalConstants = CODATA) -> float:
    """``phi_G = (pi/2) (F0 z0 tau_g / hbar)^2``."""
    return 0.5 * math.pi * (f0 * z0 * tau_g / consts.hbar) ** 2


def gate_time(f0: float, z0: float, phi_target: float = math.pi / 2, consts: PhysicalConstants = CODATA) -> float:
    """Inverse of :func:`geometric_phase`; ``hbar / (F0 z0)`` for a full pi/2 gate."""
    _positive(f0=f0, z0=z0)
    return consts.hbar / (f0 * z0) * math.sqrt(2.0 * phi_target / math.pi)


def resonant_coupling(mu: float, e0: float, consts: PhysicalConstants = CODATA) -> float:
    """``g = mu E0 / hbar``."""
    return mu * e0 / consts.hbar


def excited_population(g: float, detuning: float) -> float:
    """Off-resonant excited-state population ``g^2 / Delta^2``."""
    if detuning == 0:
        raise ValueError("detuning must be nonzero")
    return (g / detuning) ** 2


def cumulative_sp_probability(p_u: float, n_lifetimes: float) -> float:
    """``1 - (1 - P_u)^n``."""
    if not 0.0 <= p_u <= 1.0 or n_lifetimes < 0:
        raise ValueError("need 0 <= p_u <= 1 and n_lifetimes >= 0")
    return 1.0 - (1.0 - p_u) ** n_lifetimes


@dataclass
class BudgetReport:
    """Ordered intermediate quantities of a budget chain, SI units."""

    chain: str
    values: dict[str, float] = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)

    def add(self, key: str, value: float) -> float:
        self.values[key] = float(value)
        return value

    def as_lines(self) -> list[str]:
        return [f"{k}={format(v, '.17g')}" for k, v in self.values.items()]


def shelving_budget(
    laser: LaserParams = LaserParams(),
    tau_sp: float = 52.7e-3,
    eta: float = 0.2,
    quoted_delta_t: float = 15e-6,
    quoted_p_sp: float = 7e-4,
    consts: PhysicalConstants = CODATA,
) -> BudgetReport:
    """Field -> coupling element -> sideband Rabi frequency -> shelving time -> half-decay count.

    The shelving window defaults to two sideband pi-times computed from the
    chain; the quoted window and the quoted per-measurement probability are
    evaluated alongside because the three are not mutually consistent.
    """
    rep = BudgetReport("shelving", inputs={"laser": asdict(laser), "tau_sp": tau_sp, "eta": eta,
                                           "quoted_delta_t": quoted_delta_t, "quoted_p_sp": quoted_p_sp})
    e0 = rep.add("E0_V_per_m", field_strength(laser, consts))
    omega = rep.add("transition_omega_rad_per_s", angular_frequency(laser.wavelength, consts))
    mu = quadrupole_moment(1.0 / tau_sp, omega, consts)
    rep.add("mu_printed", mu.printed)
    rep.add("mu_standard_C_m", mu.standard)
    for tag, m in (("printed", mu.printed), ("standard", mu.standard)):
        om = rep.add(f"omega_rsb_{tag}_rad_per_s", rsb_rabi_frequency(eta, m, e0, consts))
        tau_rsb = rep.add(f"tau_rsb_{tag}_s", 2 * math.pi / om)
        rep.add(f"delta_t_{tag}_s", 2 * tau_rsb)
        rep.add(f"N_half_{tag}", half_decay_measurements(tau_sp, 2 * tau_rsb))
        rep.add(f"p_sp_{tag}", 1.0 - math.exp(-2 * tau_rsb / tau_sp))
    rep.add("N_half_quoted_delta_t", half_decay_measurements(tau_sp, quoted_delta_t))
    rep.add("p_sp_quoted_delta_t", 1.0 - math.exp(-quoted_delta_t / tau_sp))
    rep.add("N_half_quoted_p_sp", n_half(quoted_p_sp))
    return rep


def dipole_force_budget(
    laser: LaserParams = LaserParams(wavelength=313e-9),
    mass: float = 9.012182 * CODATA.amu,
    stretch_mode_omega: float = 2 * math.pi * 6e6,
    eta: float = 0.2,
    linewidth: float = 2 * math.pi * 19.4e6,
    excited_population_target: float = 2e-5,
    detuning: float | None = None,
    n_lifetimes: float = 23.0,
    crossing_angle: float = math.pi / 2,
    consts: PhysicalConstants = CODATA,
) -> BudgetReport:
    """Field -> dipole element -> detuning -> Stark-gradient force -> gate time -> ``P_sp``.

    Without an explicit ``detuning`` it is chosen so that the off-resonant
    population equals ``excited_population_target``.  ``linewidth`` (rad/s)
    fixes the dipole element through the standard Einstein-A relation.
    """
    rep = BudgetReport("dipole_force", inputs={
        "laser": asdict(laser), "mass": mass, "stretch_mode_omega": stretch_mode_omega, "eta": eta,
        "linewidth": linewidth, "excited_population_target": excited_population_target,
        "detuning": detuning, "n_lifetimes": n_lifetimes, "crossing_angle": crossing_angle,
    })
    e0 = rep.add("E0_V_per_m", field_strength(laser, consts))
    omega = rep.add("transition_omega_rad_per_s", angular_frequency(laser.wavelength, consts))
    mu = rep.add("mu_C_m", quadrupole_moment(linewidth, omega, consts).standard)
    g = rep.add("g_rad_per_s", resonant_coupling(mu, e0, consts))
    if detuning is None:
        detuning = g / math.sqrt(excited_population_target)
    detuning = rep.add("detuning_rad_per_s", detuning)
    p_u = rep.add("P_u", excited_population(g, detuning))
    k_eff = rep.add("k_eff_per_m", standing_wave_k(laser.wavelength, crossing_angle))
    z0 = rep.add("z0_lamb_dicke_m", width_from_lamb_dicke(eta, k_eff))
    rep.add("z0_mass_m", ground_state_width(mass, stretch_mode_omega, consts))
    force = dipole_force(mu, e0, k_eff, detuning, consts)
    rep.add("stark_gradient_per_s_m", force.stark_gradient)
    f0 = rep.add("F0_N", force.force)
    rep.add("tau_g_s", gate_time(f0, z0, consts=consts))
    rep.add("P_sp", cumulative_sp_probability(p_u, n_lifetimes))
    rep.add("N_half", n_half(rep.values["P_sp"]))
    return rep
