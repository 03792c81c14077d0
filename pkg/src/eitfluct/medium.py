"""Medium parameters, field configuration and input-noise models.

Natural units: the excited-state linewidth ``gamma`` sets the frequency
scale, and propagation distance is usually quoted as the dimensionless
``z * C / gamma`` where ``C`` is the value of :func:`coupling_constant`.
All types here are immutable after construction and safe to share across
threads or worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError

__all__ = [
    "MediumParams",
    "FieldConfig",
    "CoherentNoise",
    "SqueezedNoise",
    "TabulatedNoise",
    "InputNoise",
    "rabi_frequencies",
    "coupling_constant",
    "squeezed_preset",
    "PARAM_KEYS",
    "load_params",
    "write_params",
]


@dataclass(frozen=True)
class MediumParams:
    """Atomic and geometric constants of the Lambda medium.

    Parameters
    ----------
    gamma1, gamma2 : float
        Partial decay rates of the excited state into the two ground
        states.  The total linewidth ``gamma = gamma1 + gamma2`` is a
        derived property, never stored, so the sum rule holds by
        construction.
    g1, g2 : float
        Dipole coupling constants of the two transitions (rate units).
    gamma12 : float
        Ground-state decoherence rate (default 0).
    atom_number, medium_length, light_speed : float
        N, L and the c-scale; c enters only through the coupling
        constant, L is geometry metadata for unit conversions.
    """

    gamma1: float
    gamma2: float
    g1: float
    g2: float
    gamma12: float = 0.0
    atom_number: float = 1.0
    medium_length: float = 1.0
    light_speed: float = 1.0

    def __post_init__(self):
        for name in ("gamma1", "gamma2", "g1", "g2", "gamma12"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.atom_number < 1.0:
            raise DomainError(f"atom_number must be >= 1, got {self.atom_number}")
        if self.medium_length <= 0.0:
            raise DomainError(f"medium_length must be > 0, got {self.medium_length}")
        if self.light_speed <= 0.0:
            raise DomainError(f"light_speed must be > 0, got {self.light_speed}")

    @property
    def gamma(self) -> float:
        """Total excited-state linewidth."""
        return self.gamma1 + self.gamma2


@dataclass(frozen=True)
class FieldConfig:
    """Carrier detunings and real mean amplitudes of pump (1) and probe (2).

    The adopted phase convention makes both mean amplitudes real and
    non-negative; complex amplitudes are out of scope.
    """

    delta1: float = 0.0
    delta2: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        if self.alpha1 < 0.0 or self.alpha2 < 0.0:
            raise DomainError("mean amplitudes alpha1, alpha2 must be >= 0 "
                              "(real-amplitude phase convention)")

    @property
    def two_photon_resonant(self) -> bool:
        return self.delta1 == self.delta2

    @classmethod
    def from_rabi(cls, m: MediumParams, rabi1: float, rabi2: float,
                  delta1: float = 0.0, delta2: float = 0.0) -> "FieldConfig":
        """Build a config with given Rabi frequencies, alpha_j = rabi_j / g_j."""
        if rabi1 > 0.0 and m.g1 == 0.0:
            raise DomainError("rabi1 > 0 requires g1 > 0")
        if rabi2 > 0.0 and m.g2 == 0.0:
            raise DomainError("rabi2 > 0 requires g2 > 0")
        a1 = rabi1 / m.g1 if rabi1 > 0.0 else 0.0
        a2 = rabi2 / m.g2 if rabi2 > 0.0 else 0.0
        return cls(delta1=delta1, delta2=delta2, alpha1=a1, alpha2=a2)


def rabi_frequencies(m: MediumParams, f: FieldConfig) -> tuple[float, float, float]:
    """Return (Omega1, Omega2, Omega) with Omega_j = |g_j alpha_j|."""
    o1 = abs(m.g1 * f.alpha1)
    o2 = abs(m.g2 * f.alpha2)
    return o1, o2, math.hypot(o1, o2)


def coupling_constant(m: MediumParams, f: FieldConfig) -> float:
    """Spatial coupling scale C = N (g1^2 Omega2^2 + g2^2 Omega1^2) / (Omega^2 c).

    This is the rate-per-length scale of all propagation effects; plots
    use the dimensionless z*C/gamma.  Raises if no field drives the atoms.
    """
    o1, o2, o = rabi_frequencies(m, f)
    if o == 0.0:
        raise DomainError("no driving field: Omega = 0 leaves the coupling "
                          "constant undefined")
    return m.atom_number * (m.g1 ** 2 * o2 ** 2 + m.g2 ** 2 * o1 ** 2) / (o ** 2 * m.light_speed)


def squeezed_preset(xi: float) -> tuple[float, float]:
    """(f, g) pair of a broadband squeezed input with squeezing parameter xi.

    f = sinh^2(xi), g = -sinh(2 xi)/2, so the z=0 spectrum
    1 + 2 g cos(2 theta) + 2 f has its minimum exp(-2 xi) at theta = 0.
    """
    return math.sinh(xi) ** 2, -0.5 * math.sinh(2.0 * xi)


def _check_physical(f_vals, g_vals, what: str):
    worst = np.min(1.0 + 2.0 * np.asarray(f_vals) - 2.0 * np.abs(g_vals))
    if worst < -1e-12:
        raise DomainError(
            f"{what}: spectrum 1 + 2 g cos(2 theta) + 2 f dips to {worst:.3e} < 0; "
            "physical input noise needs |g| <= f + 1/2")


@dataclass(frozen=True)
class CoherentNoise:
    """Coherent-state input: f = g = 0 identically."""

    def f(self, omega):
        return np.zeros_like(np.asarray(omega, dtype=float))

    def g(self, omega):
        return np.zeros_like(np.asarray(omega, dtype=float))


@dataclass(frozen=True)
class SqueezedNoise:
    """Broadband squeezed input with frequency-independent (f, g)."""

    xi: float

    def f(self, omega):
        val, _ = squeezed_preset(self.xi)
        return np.full_like(np.asarray(omega, dtype=float), val)

    def g(self, omega):
        _, val = squeezed_preset(self.xi)
        return np.full_like(np.asarray(omega, dtype=float), val)


@dataclass(frozen=True)
class TabulatedNoise:
    """Tabulated (f, g) on a frequency grid.

    Evaluation symmetrizes in omega (stationary quadrature spectra are
    even) and clamps rather than extrapolates outside the grid; silent
    extrapolation would hide user error.
    """

    omega: tuple
    f_values: tuple
    g_values: tuple

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        if w.ndim != 1 or w.size < 2:
            raise DomainError("TabulatedNoise needs a 1-d grid with >= 2 points")
        if np.any(np.diff(w) <= 0.0):
            raise DomainError("TabulatedNoise grid must be strictly increasing")
        if len(self.f_values) != w.size or len(self.g_values) != w.size:
            raise DomainError("TabulatedNoise value arrays must match the grid")
        probe = np.concatenate([w, -w])
        _check_physical(self.f(probe), self.g(probe), "TabulatedNoise")

    def _interp_even(self, values, omega):
        w = np.asarray(self.omega, dtype=float)
        v = np.asarray(values, dtype=float)
        x = np.asarray(omega, dtype=float)
        return 0.5 * (np.interp(x, w, v) + np.interp(-x, w, v))

    def f(self, omega):
        return self._interp_even(self.f_values, omega)

    def g(self, omega):
        return self._interp_even(self.g_values, omega)


@dataclass(frozen=True)
class InputNoise:
    """Input quadrature-noise functions for pump (field 1) and probe (field 2).

    The z=0 spectra are S_j = 1 + 2 g_j(omega) cos(2 theta) + 2 f_j(omega),
    and the fields enter uncorrelated (cross spectrum 0 at z=0).
    """

    pump: object = CoherentNoise()
    probe: object = CoherentNoise()

    def f1(self, omega):
        return self.pump.f(omega)

    def g1n(self, omega):
        return self.pump.g(omega)

    def f2(self, omega):
        return self.probe.f(omega)

    def g2n(self, omega):
        return self.probe.g(omega)

    def pump_is_coherent(self, omega) -> bool:
        return bool(np.all(self.f1(omega) == 0.0) and np.all(self.g1n(omega) == 0.0))

    def initial_spectrum(self, field_index: int, omega, theta):
        """S_j(z=0, omega, theta) for field_index in {1, 2}."""
        if field_index == 1:
            fv, gv = self.f1(omega), self.g1n(omega)
        elif field_index == 2:
            fv, gv = self.f2(omega), self.g2n(omega)
        else:
            raise DomainError(f"field_index must be 1 or 2, got {field_index}")
        return 1.0 + 2.0 * gv * np.cos(2.0 * np.asarray(theta, dtype=float)) + 2.0 * fv


# --------------------------------------------------------------------------
# Flat key=value parameter files
# --------------------------------------------------------------------------

PARAM_KEYS = ("gamma1", "gamma2", "gamma12", "g1", "g2", "N", "L", "c",
              "delta1", "delta2", "alpha1", "alpha2",
              "noise1", "noise2", "xi1", "xi2")

_DEFAULTS = {
    "gamma1": 0.5, "gamma2": 0.5, "gamma12": 0.0,
    "g1": 0.1, "g2": 0.1, "N": 1e12, "L": 1.0, "c": 1.0,
    "delta1": 0.0, "delta2": 0.0, "alpha1": 0.0, "alpha2": 0.0,
    "noise1": "coherent", "noise2": "coherent", "xi1": 0.0, "xi2": 0.0,
}


def _noise_model(kind: str, xi: float, key: str):
    kind = kind.strip().lower()
    if kind == "coherent":
        return CoherentNoise()
    if kind == "squeezed":
        return SqueezedNoise(xi=xi)
    raise DomainError(f"parameter {key} must be 'coherent' or 'squeezed', got {kind!r}")


def load_params(path) -> tuple[MediumParams, FieldConfig, InputNoise]:
    """Parse a flat ``key = value`` parameter file ('#' starts a comment)."""
    values = dict(_DEFAULTS)
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in PARAM_KEYS:
            raise DomainError(f"{path}:{lineno}: unknown parameter key {key!r}")
        if key in ("noise1", "noise2"):
            values[key] = val
        else:
            try:
                values[key] = float(val)
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: key {key!r} needs a number, "
                                  f"got {val!r}") from exc
    m = MediumParams(gamma1=values["gamma1"], gamma2=values["gamma2"],
                     gamma12=values["gamma12"], g1=values["g1"], g2=values["g2"],
                     atom_number=values["N"], medium_length=values["L"],
                     light_speed=values["c"])
    f = FieldConfig(delta1=values["delta1"], delta2=values["delta2"],
                    alpha1=values["alpha1"], alpha2=values["alpha2"])
    noise = InputNoise(pump=_noise_model(values["noise1"], values["xi1"], "noise1"),
                       probe=_noise_model(values["noise2"], values["xi2"], "noise2"))
    return m, f, noise


def write_params(path, m: MediumParams, f: FieldConfig, noise: InputNoise):
    """Write a parameter file readable by :func:`load_params`."""
    def kind_xi(model):
        if isinstance(model, CoherentNoise):
            return "coherent", 0.0
        if isinstance(model, SqueezedNoise):
            return "squeezed", model.xi
        raise DomainError("parameter files support only coherent/squeezed presets")

    n1, x1 = kind_xi(noise.pump)
    n2, x2 = kind_xi(noise.probe)
    lines = [
        f"gamma1 = {m.gamma1!r}", f"gamma2 = {m.gamma2!r}", f"gamma12 = {m.gamma12!r}",
        f"g1 = {m.g1!r}", f"g2 = {m.g2!r}", f"N = {m.atom_number!r}",
        f"L = {m.medium_length!r}", f"c = {m.light_speed!r}",
        f"delta1 = {f.delta1!r}", f"delta2 = {f.delta2!r}",
        f"alpha1 = {f.alpha1!r}", f"alpha2 = {f.alpha2!r}",
        f"noise1 = {n1}", f"noise2 = {n2}", f"xi1 = {x1!r}", f"xi2 = {x2!r}",
    ]
    Path(path).write_text("\n".join(lines) + "\n")
