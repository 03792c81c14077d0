"""Closed-form quadrature-noise and correlation spectra.

Exact evaluators for the analytic propagation results: complex propagation
coefficients, pump/probe spectra and their correlations at resonance and at
detuned two-photon resonance, the phase-difference spectrum, quadrature
rotation angles, characteristic length scales and absorption diagnostics.

Conventions
-----------
* ``Im Q <= 0`` always; every decay factor is ``exp(Im(Q) z)``, i.e. decaying.
  (Equivalent to ``exp(-|Q_i| z)``; absorption, never growth.)
* Spectrum frequency ``omega`` is measured from the field carriers.  The
  absorption-extremum frequencies reported by :func:`diagnostics` are also
  given shifted by ``delta``, i.e. measured from the atomic transition.
* All evaluators broadcast over numpy arrays; pure functions of immutable
  inputs, safe for data-parallel grid evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError, UnsupportedRegimeError
from .medium import (FieldConfig, InputNoise, MediumParams, coupling_constant,
                     rabi_frequencies)

__all__ = [
    "PropagationCoefficients",
    "q_resonance",
    "q_detuned",
    "propagation_coefficients",
    "spectrum_resonance",
    "correlation_resonance",
    "phase_difference_spectrum",
    "spectrum_detuned",
    "correlation_detuned",
    "RotationAngles",
    "rotation_angle",
    "Diagnostics",
    "diagnostics",
    "IsotropyDistances",
    "isotropy_distances",
    "LargeDetuningSpectrum",
    "large_detuning_spectrum",
]


# --------------------------------------------------------------------------
# Propagation coefficients
# --------------------------------------------------------------------------

def _q_of(omega, shift, m: MediumParams, f: FieldConfig):
    """Q = omega C / (Omega^2 - omega (omega + shift) + i omega gamma / 2)."""
    w = np.asarray(omega, dtype=float)
    _, _, o = rabi_frequencies(m, f)
    cc = coupling_constant(m, f)
    den = o ** 2 - w * (w + shift) + 0.5j * w * m.gamma
    if np.any(den == 0.0):
        raise SingularityError(
            "propagation coefficient pole: Omega^2 = omega (omega + delta) with "
            "gamma = 0; evaluate away from the exact pole")
    q = w * cc / den
    return q


def q_resonance(omega, m: MediumParams, f: FieldConfig):
    """Complex Q(omega) for resonant carriers (delta1 = delta2 = 0)."""
    return _q_of(omega, 0.0, m, f)


def q_detuned(omega, delta, m: MediumParams, f: FieldConfig):
    """(Q_plus, Q_minus) for common carrier detuning delta.

    Q_pm = omega C / (Omega^2 - omega (omega +- delta) + i omega gamma / 2);
    at delta = 0 both coincide with :func:`q_resonance`.
    """
    return _q_of(omega, +np.asarray(delta, dtype=float), m, f), \
        _q_of(omega, -np.asarray(delta, dtype=float), m, f)


@dataclass(frozen=True)
class PropagationCoefficients:
    """Complex propagation coefficient pair with real/imaginary parts exposed.

    At resonance (``delta = 0``) the pair is degenerate and ``q_r``/``q_i``
    are the natural accessors; detuned callers use the per-branch parts.
    """

    q_plus: complex
    q_minus: complex

    def __post_init__(self):
        if self.q_plus.imag > 1e-15 or self.q_minus.imag > 1e-15:
            raise DomainError("Im Q must be <= 0; propagation only absorbs")

    @property
    def q_r(self) -> float:
        return self.q_plus.real

    @property
    def q_i(self) -> float:
        return self.q_plus.imag

    @property
    def qr_plus(self) -> float:
        return self.q_plus.real

    @property
    def qi_plus(self) -> float:
        return self.q_plus.imag

    @property
    def qr_minus(self) -> float:
        return self.q_minus.real

    @property
    def qi_minus(self) -> float:
        return self.q_minus.imag


def propagation_coefficients(omega, m: MediumParams, f: FieldConfig,
                             delta: float = 0.0) -> PropagationCoefficients:
    qp, qm = q_detuned(omega, delta, m, f)
    return PropagationCoefficients(q_plus=complex(qp), q_minus=complex(qm))


# --------------------------------------------------------------------------
# Resonance spectra
# --------------------------------------------------------------------------

def _maybe_scalar(arr):
    arr = np.asarray(arr)
    return arr[()] if arr.ndim == 0 else arr


def _require_resonant(f: FieldConfig, what: str):
    if f.delta1 != 0.0 or f.delta2 != 0.0:
        raise UnsupportedRegimeError(
            f"{what} is the resonant closed form (delta1 = delta2 = 0); use the "
            "detuned evaluators or the langevin module")


def spectrum_resonance(z, omega, theta, field_index, noise: InputNoise,
                       m: MediumParams, f: FieldConfig):
    """Quadrature spectrum S_j(z, omega, theta) for resonant carriers.

    Valid for arbitrary input noise on both fields.  Reproduces the input
    spectrum at z = 0 and the oscillatory noise interchange between pump
    and probe at scale 2 pi / Q_r, damped on the absorption scale.
    """
    _require_resonant(f, "spectrum_resonance")
    a, b = f.alpha1 ** 2, f.alpha2 ** 2
    s = a + b
    if s == 0.0:
        raise DomainError("alpha1^2 + alpha2^2 must be > 0")
    q = q_resonance(omega, m, f)
    z = np.asarray(z, dtype=float)
    e = np.exp(q.imag * z)
    cqr = np.cos(q.real * z)
    c2 = np.cos(2.0 * np.asarray(theta, dtype=float))
    f1, g1 = noise.f1(omega), noise.g1n(omega)
    f2, g2 = noise.f2(omega), noise.g2n(omega)
    mixed = a * f2 + b * f1 + c2 * (a * g2 + b * g1)
    if field_index == 1:
        osc = (f1 - f2) + c2 * (g1 - g2)
        plain = a * f1 + b * f2 + c2 * (a * g1 + b * g2)
        out = 1.0 + (4.0 * e * cqr * a * b * osc
                     + 2.0 * e ** 2 * b * mixed + 2.0 * a * plain) / s ** 2
    elif field_index == 2:
        osc = (f2 - f1) + c2 * (g2 - g1)
        plain = a * f1 + b * f2 + c2 * (a * g1 + b * g2)
        out = 1.0 + (4.0 * e * cqr * a * b * osc
                     + 2.0 * e ** 2 * a * mixed + 2.0 * b * plain) / s ** 2
    else:
        raise DomainError(f"field_index must be 1 or 2, got {field_index}")
    return _maybe_scalar(out)


def _require_symmetric(m: MediumParams, f: FieldConfig, what: str):
    if f.alpha1 != f.alpha2:
        raise UnsupportedRegimeError(
            f"{what} closed form needs alpha1 = alpha2; for unequal mean fields "
            "use the langevin module")
    if m.g1 != m.g2:
        raise UnsupportedRegimeError(
            f"{what} closed form needs equal coupling constants g1 = g2; use "
            "the langevin module otherwise")


def correlation_resonance(z, omega, theta1, theta2, noise: InputNoise,
                          m: MediumParams, f: FieldConfig):
    """Cross spectrum S_c between pump theta1- and probe theta2-quadratures.

    Resonant carriers, alpha1 = alpha2 and g1 = g2 (the regime in which the
    closed form holds).  Zero at z = 0; for z well inside the absorption
    length the correlations oscillate as sin(Q_r z) with coefficients set by
    the noise asymmetry, and for z far beyond it they saturate at the
    constant plateau (cos(t1-t2)(f1+f2) + cos(t1+t2)(g1n+g2n)) / 2.

    The noise-sum terms decay with the doubled exponent exp(2 Q_i z), the
    same power as the corresponding quadrature-spectrum terms; this is the
    delta -> 0 limit of :func:`correlation_detuned` and is confirmed to
    machine precision by the langevin solver.
    """
    _require_resonant(f, "correlation_resonance")
    _require_symmetric(m, f, "correlation_resonance")
    q = q_resonance(omega, m, f)
    z = np.asarray(z, dtype=float)
    e = np.exp(q.imag * z)
    sqr = np.sin(q.real * z)
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    f1, g1 = noise.f1(omega), noise.g1n(omega)
    f2, g2 = noise.f2(omega), noise.g2n(omega)
    fsum = np.cos(t1 - t2) * (f1 + f2)
    gsum = np.cos(t1 + t2) * (g1 + g2)
    out = (0.5 * (1.0 - e ** 2) * (fsum + gsum)
           + e * sqr * (np.sin(t1 - t2) * (f2 - f1) + np.sin(t1 + t2) * (g1 - g2)))
    return _maybe_scalar(out)


def phase_difference_spectrum(z, omega, noise: InputNoise,
                              m: MediumParams, f: FieldConfig):
    """Spectrum of the phase-noise difference between the fields.

    S_phi(omega, z) = exp(Q_i z) * S_phi(omega, 0) with the z = 0 value
    assembled from the two theta = pi/2 quadrature spectra and their cross
    term, scaled by 1/alpha^2 (small-noise phase/quadrature proportionality).
    Requires alpha1 = alpha2 = alpha > 0.
    """
    if f.alpha1 != f.alpha2:
        raise DomainError("phase_difference_spectrum needs alpha1 = alpha2")
    if f.alpha1 == 0.0:
        raise DomainError("phase_difference_spectrum needs alpha > 0")
    half_pi = 0.5 * math.pi
    s1 = spectrum_resonance(0.0, omega, half_pi, 1, noise, m, f)
    s2 = spectrum_resonance(0.0, omega, half_pi, 2, noise, m, f)
    sc = correlation_resonance(0.0, omega, half_pi, half_pi, noise, m, f)
    s_phi0 = (s1 + s2 - 2.0 * sc) / f.alpha1 ** 2
    q = q_resonance(omega, m, f)
    out = np.exp(q.imag * np.asarray(z, dtype=float)) * s_phi0
    return _maybe_scalar(out)


# --------------------------------------------------------------------------
# Detuned two-photon resonance spectra
# --------------------------------------------------------------------------

def _require_coherent_pump(noise: InputNoise, omega, what: str):
    if not noise.pump_is_coherent(omega):
        raise UnsupportedRegimeError(
            f"{what} assumes an initially coherent pump (f1 = g1 = 0); noisy "
            "pumps at detuned two-photon resonance need the langevin module")


def spectrum_detuned(z, omega, theta, field_index, noise: InputNoise,
                     m: MediumParams, f: FieldConfig, delta):
    """Quadrature spectrum at detuned two-photon resonance delta1 = delta2 = delta.

    Assumes a coherent pump input; reduces to :func:`spectrum_resonance`
    at delta = 0 and to the squeezed-vacuum rotation form at alpha2 = 0.
    """
    _require_coherent_pump(noise, omega, "spectrum_detuned")
    a, b = f.alpha1 ** 2, f.alpha2 ** 2
    s = a + b
    if s == 0.0:
        raise DomainError("alpha1^2 + alpha2^2 must be > 0")
    qp, qm = q_detuned(omega, delta, m, f)
    z = np.asarray(z, dtype=float)
    ep, em = np.exp(qp.imag * z), np.exp(qm.imag * z)
    up, um = qp.real * z, qm.real * z
    th = np.asarray(theta, dtype=float)
    c2 = np.cos(2.0 * th)
    f2, g2 = noise.f2(omega), noise.g2n(omega)
    if field_index == 1:
        out = 1.0 + (a * b / s ** 2) * (
            f2 * (2.0 + em ** 2 + ep ** 2 - 2.0 * em * np.cos(um) - 2.0 * ep * np.cos(up))
            + 2.0 * g2 * (c2 + em * ep * np.cos(um - up + 2.0 * th)
                          - ep * np.cos(up - 2.0 * th) - em * np.cos(um + 2.0 * th)))
    elif field_index == 2:
        out = 1.0 + (
            a ** 2 * (f2 * (em ** 2 + ep ** 2)
                      + 2.0 * g2 * em * ep * np.cos(um - up + 2.0 * th))
            + a * b * (2.0 * f2 * (em * np.cos(um) + ep * np.cos(up))
                       + 2.0 * g2 * (ep * np.cos(up - 2.0 * th)
                                     + em * np.cos(um + 2.0 * th)))
            + 2.0 * b ** 2 * (f2 + g2 * c2)) / s ** 2
    else:
        raise DomainError(f"field_index must be 1 or 2, got {field_index}")
    return _maybe_scalar(out)


def correlation_detuned(z, omega, theta1, theta2, noise: InputNoise,
                        m: MediumParams, f: FieldConfig, delta):
    """Cross spectrum at detuned two-photon resonance (alpha1 = alpha2, g1 = g2).

    Reduces to :func:`correlation_resonance` at delta = 0 and vanishes at
    z = 0 for any admissible input.  The f-sum term decays with the
    doubled exponent exp(2 Q-_i z) (same decay power as the corresponding
    quadrature-spectrum terms); the langevin solver confirms this form to
    machine precision, see tests.
    """
    _require_symmetric(m, f, "correlation_detuned")
    qp, qm = q_detuned(omega, delta, m, f)
    z = np.asarray(z, dtype=float)
    ep, em = np.exp(qp.imag * z), np.exp(qm.imag * z)
    up, um = qp.real * z, qm.real * z
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    f1, g1 = noise.f1(omega), noise.g1n(omega)
    f2, g2 = noise.f2(omega), noise.g2n(omega)
    dd, ss = t1 - t2, t1 + t2
    out = (0.5 * (1.0 - em ** 2) * np.cos(dd) * (f1 + f2)
           + em * np.sin(um) * np.sin(dd) * (f2 - f1)
           - 0.5 * (g1 - g2) * (em * np.cos(um + ss) - ep * np.cos(up - ss))
           + 0.5 * (g1 + g2) * (np.cos(ss) - em * ep * np.cos(um - up + ss)))
    return _maybe_scalar(out)


# --------------------------------------------------------------------------
# Rotation angles, diagnostics, isotropy distances, large-detuning limit
# --------------------------------------------------------------------------

def _fold_pi(angle):
    return np.mod(angle, math.pi)


@dataclass(frozen=True)
class RotationAngles:
    """Quadrature-rotation angles accumulated over a propagation distance.

    ``squeezing_rotation`` is the vacuum-probe convention: the input-frame
    angle (Q-_r - Q+_r) z / 2 whose initial spectrum value appears at the
    output theta = 0 quadrature.  ``theta_min``/``theta_max`` follow the
    equal-amplitude convention, theta_min = (Q+_r - Q-_r) z / 4 mod pi,
    which rotates at half the vacuum-probe rate and with the opposite
    sign; the two conventions describe different physical settings and are
    reported separately rather than unified.
    """

    squeezing_rotation: float
    theta_min: float
    theta_max: float


def rotation_angle(z, omega, delta, m: MediumParams, f: FieldConfig) -> RotationAngles:
    qp, qm = q_detuned(omega, delta, m, f)
    rot = 0.5 * (qm.real - qp.real) * z
    tmin = _fold_pi(0.25 * (qp.real - qm.real) * z)
    return RotationAngles(squeezing_rotation=float(rot),
                          theta_min=float(tmin),
                          theta_max=float(_fold_pi(tmin + 0.5 * math.pi)))


@dataclass(frozen=True)
class Diagnostics:
    """Length scales and absorption structure at one (omega, delta) point.

    Frequencies in ``absorption_extrema`` are measured from the atomic
    transition; ``absorption_extrema_field`` holds the same four roots
    measured from the carriers (shifted by -delta).  ``window_width`` is
    the central transparency-window estimate 2 Omega^2 / delta (None at
    delta = 0, where the window is the full EIT dip).
    """

    z_abs: float
    z_osc: float
    z_int: float
    absorption_extrema: tuple
    absorption_extrema_field: tuple
    window_width: float | None


def diagnostics(omega, delta, m: MediumParams, f: FieldConfig) -> Diagnostics:
    qp, qm = q_detuned(omega, delta, m, f)
    qi_max = max(abs(qp.imag), abs(qm.imag))
    z_abs = math.inf if qi_max == 0.0 else 1.0 / qi_max
    if delta == 0.0:
        z_osc = math.inf if qp.real == 0.0 else 2.0 * math.pi / qp.real
        z_int = math.inf
    else:
        z_osc = math.inf if qp.real == 0.0 else math.pi / qp.real
        dq = qm.real - qp.real
        z_int = math.inf if dq == 0.0 else 2.0 * math.pi / dq
    _, _, o = rabi_frequencies(m, f)
    root = math.sqrt(delta ** 2 + 4.0 * o ** 2)
    field_frame = sorted(0.5 * (s1 * delta + s2 * root)
                         for s1 in (+1.0, -1.0) for s2 in (+1.0, -1.0))
    atom_frame = [delta + w for w in field_frame]
    width = None if delta == 0.0 else 2.0 * o ** 2 / abs(delta)
    return Diagnostics(z_abs=z_abs, z_osc=z_osc, z_int=z_int,
                       absorption_extrema=tuple(atom_frame),
                       absorption_extrema_field=tuple(field_frame),
                       window_width=width)


@dataclass(frozen=True)
class IsotropyDistances:
    """Distances where one field's spectrum is theta-independent.

    ``z2_plus``/``z2_minus`` solve Q+-_r z = 4 pi m_index + pi (probe);
    ``z1_plus``/``z1_minus`` solve Q+-_r z = 4 pi m_index (pump).  The
    attached values are 1 + (cos(Q-+_r z) + 1) sinh^2(xi) / 2, evaluated
    with the opposite branch.
    """

    z2_plus: float
    z2_minus: float
    z1_plus: float
    z1_minus: float
    s2_plus: float
    s2_minus: float
    s1_plus: float
    s1_minus: float


def isotropy_distances(m_index: int, m: MediumParams, f: FieldConfig,
                       delta, omega, xi: float) -> IsotropyDistances:
    if f.alpha1 != f.alpha2:
        raise DomainError("isotropy distances assume alpha1 = alpha2")
    qp, qm = q_detuned(omega, delta, m, f)
    if qp.real == 0.0 or qm.real == 0.0:
        raise DomainError("Q_r = 0: no finite isotropy distance")
    phase2 = 4.0 * math.pi * m_index + math.pi
    phase1 = 4.0 * math.pi * m_index
    z2p, z2m = phase2 / qp.real, phase2 / qm.real
    z1p, z1m = phase1 / qp.real, phase1 / qm.real
    sh2 = math.sinh(xi) ** 2

    def value(opposite_qr, z):
        return 1.0 + 0.5 * (math.cos(opposite_qr * z) + 1.0) * sh2

    return IsotropyDistances(
        z2_plus=z2p, z2_minus=z2m, z1_plus=z1p, z1_minus=z1m,
        s2_plus=value(qm.real, z2p), s2_minus=value(qp.real, z2m),
        s1_plus=value(qm.real, z1p), s1_minus=value(qp.real, z1m))


@dataclass(frozen=True)
class LargeDetuningSpectrum:
    """Large-detuning limit of the equal-amplitude squeezed-probe spectra."""

    s1: float
    s2: float
    regime_ok: bool
    warnings: tuple


def large_detuning_spectrum(z, omega, m: MediumParams, f: FieldConfig,
                            delta, xi: float) -> LargeDetuningSpectrum:
    """Approximate (S1, S2) deep in the large-detuning regime.

    S2(z) = exp(-2 xi) cos^4(Q+_r z / 2) + sin^2(Q+_r z / 2)
            + exp(2 xi) sin^2(Q+_r z) / 4,  S1(z) = S2(z + pi / Q+_r).
    Preconditions (|delta omega| >> Omega^2, omega^2; delta >> gamma;
    z < z_abs) failing by less than a 10x margin attach warnings instead
    of raising.
    """
    if f.alpha1 != f.alpha2:
        raise DomainError("large-detuning closed form assumes alpha1 = alpha2")
    _, _, o = rabi_frequencies(m, f)
    qp, qm = q_detuned(omega, delta, m, f)
    warnings = []
    prod = abs(delta * omega)
    if prod < 10.0 * o ** 2:
        warnings.append(f"|delta*omega| = {prod:.3g} not >> Omega^2 = {o**2:.3g}")
    if prod < 10.0 * omega ** 2:
        warnings.append(f"|delta*omega| = {prod:.3g} not >> omega^2 = {omega**2:.3g}")
    if m.gamma > 0.0 and abs(delta) < 10.0 * m.gamma:
        warnings.append(f"|delta| = {abs(delta):.3g} not >> gamma = {m.gamma:.3g}")
    qi_max = max(abs(qp.imag), abs(qm.imag))
    if qi_max > 0.0 and z >= 1.0 / qi_max:
        warnings.append("z reaches the absorption scale; decay is not negligible")

    def s2_of(zz):
        u = qp.real * zz
        return (math.exp(-2.0 * xi) * math.cos(0.5 * u) ** 4
                + math.sin(0.5 * u) ** 2
                + 0.25 * math.exp(2.0 * xi) * math.sin(u) ** 2)

    if qp.real == 0.0:
        raise DomainError("Q+_r = 0: the large-detuning form is degenerate here")
    return LargeDetuningSpectrum(s1=s2_of(z + math.pi / qp.real), s2=s2_of(z),
                                 regime_ok=not warnings, warnings=tuple(warnings))
