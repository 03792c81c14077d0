"""Acceptance suite: one test per criterion, tolerances pinned.

Each test prints a single line with the measured figure of merit next to
its threshold, so a verbose run doubles as the acceptance report."""

import math
import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from eitfluct import closedform as cf
from eitfluct import doppler as dp
from eitfluct import langevin as lv
from eitfluct.medium import (FieldConfig, InputNoise, MediumParams,
                             SqueezedNoise, coupling_constant)

M_STD = MediumParams(gamma1=0.5, gamma2=0.5, g1=0.1, g2=0.1,
                     atom_number=1e6, light_speed=1.0)
M_FIG9 = MediumParams(gamma1=0.5, gamma2=0.5, g1=0.1, g2=0.1,
                      atom_number=1e12, light_speed=1.0)
M_LOSSLESS = MediumParams(gamma1=0.0, gamma2=0.0, g1=0.1, g2=0.1,
                          atom_number=1e6, light_speed=1.0)


def _report(name, value, threshold, note=""):
    print(f"\n[{name}] measured {value:.3e} vs threshold {threshold:.3e} "
          f"{note}".rstrip())


def test_criterion_01_oracle_equivalence():
    """Langevin solver vs closed forms on the full acceptance grid."""
    start = time.time()
    f = FieldConfig(alpha1=10.0, alpha2=10.0)
    noise = InputNoise(probe=SqueezedNoise(1.0))
    cc = coupling_constant(M_STD, f)
    z = np.linspace(0.0, 40.0, 20) / cc
    omegas = np.linspace(0.02, 2.5, 20)
    thetas = (0.0, 0.55, 1.2, 2.4)
    worst = 0.0
    for delta in (0.0, 0.5, 3.0):
        ff = FieldConfig(delta1=delta, delta2=delta, alpha1=10.0, alpha2=10.0)
        prop = lv.FluctuationPropagator(M_STD, ff)
        for omega in omegas:
            for th in thetas:
                for field in (1, 2):
                    got = lv.pair_spectrum(th, field, th, field, omega, z,
                                           noise, prop, prop)
                    if delta == 0.0:
                        want = cf.spectrum_resonance(z, omega, th, field,
                                                     noise, M_STD, f)
                    else:
                        want = cf.spectrum_detuned(z, omega, th, field,
                                                   noise, M_STD, f, delta)
                    worst = max(worst, float(np.max(
                        np.abs(got - want) / np.maximum(np.abs(want), 1.0))))
                got_c = lv.pair_spectrum(thetas[1], 1, th, 2, omega, z,
                                         noise, prop, prop)
                if delta == 0.0:
                    want_c = cf.correlation_resonance(z, omega, thetas[1], th,
                                                      noise, M_STD, f)
                else:
                    want_c = cf.correlation_detuned(z, omega, thetas[1], th,
                                                    noise, M_STD, f, delta)
                worst = max(worst, float(np.max(
                    np.abs(got_c - want_c) / np.maximum(np.abs(want_c), 1.0))))
    elapsed = time.time() - start
    _report("oracle equivalence", worst, 1e-6, f"(runtime {elapsed:.1f}s < 60s)")
    assert worst < 1e-6
    assert elapsed < 60.0


def test_criterion_02_interchange_identity():
    """Oscillatory interchange: S2 at the half cycle equals S1's input."""
    f = FieldConfig(alpha1=10.0, alpha2=10.0)
    noise = InputNoise(probe=SqueezedNoise(1.0))
    omega = 1e-7
    q = cf.q_resonance(omega, M_STD, f)
    z_pi = math.pi / q.real
    assert abs(q.imag) * z_pi < 1e-6  # parameter choice per the criterion
    s2 = cf.spectrum_resonance(z_pi, omega, 0.0, 2, noise, M_STD, f)
    s1_in = float(noise.initial_spectrum(1, omega, 0.0))
    dev = abs(float(s2) - s1_in)
    _report("interchange identity", dev, 1e-4,
            f"(|Q_i| z_pi = {abs(q.imag) * z_pi:.2e})")
    assert dev < 1e-4


def test_criterion_03_envelope_decay_ratio():
    """Envelope of the interchange oscillation decays 1/e after 2.02 periods."""
    f = FieldConfig.from_rabi(M_STD, 1.0, 1.0)  # Omega = sqrt(2)
    omega = 0.30089512472084797  # makes |Omega^2-w^2|/(pi gamma w) = 2.02
    noise = InputNoise(probe=SqueezedNoise(1.0))
    q = cf.q_resonance(omega, M_STD, f)
    z_osc = 2 * math.pi / q.real
    z = np.linspace(0.0, 6.0 * z_osc, 12001)
    s2 = np.asarray(cf.spectrum_resonance(z, omega, 0.0, 2, noise, M_STD, f))
    idx_max = [k for k in range(1, len(z) - 1)
               if s2[k] > s2[k - 1] and s2[k] > s2[k + 1]]
    idx_min = [k for k in range(1, len(z) - 1)
               if s2[k] < s2[k - 1] and s2[k] < s2[k + 1]]
    z_min = z[idx_min]
    # envelope amplitude only at peaks bracketed by troughs on both sides
    # (interpolation clamps at the ends and would bias the decay fit)
    interior = [k for k in idx_max if z_min[0] < z[k] < z_min[-1]]
    z_max = z[interior]
    amp = s2[interior] - np.interp(z_max, z_min, s2[idx_min])
    period = float(np.mean(np.diff(z_max)))
    slope = np.polyfit(z_max, np.log(amp), 1)[0]
    periods_to_1_over_e = (-1.0 / slope) / period
    _report("envelope decay ratio", periods_to_1_over_e, 2.02, "(+- 0.05)")
    assert periods_to_1_over_e == pytest.approx(2.02, abs=0.05)


def test_criterion_04_rotation_law():
    """Vacuum-probe squeezing axis rotates linearly with distance.

    The numerically minimizing quadrature sits at (Q+_r - Q-_r) z / 2 mod
    pi: the output-frame axis angle, opposite in sign to the input-frame
    rotation convention returned by rotation_angle (see decisions ledger).
    """
    f = FieldConfig(alpha1=10.0, alpha2=0.0)
    noise = InputNoise(probe=SqueezedNoise(1.0))
    cc = coupling_constant(M_LOSSLESS, f)
    samples = [(zc / cc, omega, delta)
               for zc, omega, delta in
               ((3.0, 0.10, 0.5), (7.0, 0.10, 0.5), (15.0, 0.10, 0.5),
                (5.0, 0.30, 0.5), (9.0, 0.30, 1.5), (12.0, 0.05, 0.25),
                (20.0, 0.05, 0.25), (4.0, 0.45, 2.0), (11.0, 0.45, 2.0),
                (25.0, 0.20, 1.0))]
    worst = 0.0
    for z, omega, delta in samples:
        qp, qm = cf.q_detuned(omega, delta, M_LOSSLESS, f)

        def s2_of(theta, z=z, omega=omega, delta=delta):
            return float(cf.spectrum_detuned(z, omega, theta, 2, noise,
                                             M_LOSSLESS, f, delta))

        best = min((minimize_scalar(s2_of, bracket=(t0, t0 + 0.3),
                                    method="golden", options={"xtol": 1e-13})
                    for t0 in np.linspace(0.0, math.pi, 9)),
                   key=lambda r: r.fun)
        found = best.x % math.pi
        want = (0.5 * (qp.real - qm.real) * z) % math.pi
        diff = abs(found - want) % math.pi
        worst = max(worst, min(diff, math.pi - diff))
    _report("rotation law argmin", worst, 1e-6, "rad across 10 samples")
    assert worst < 1e-6


def test_criterion_05_absorption_structure():
    """Five transparency regions delimited by the four absorption extrema."""
    f = FieldConfig.from_rabi(M_STD, 0.6, 0.0)
    delta = 3.0
    diag = cf.diagnostics(0.1, delta, M_STD, f)
    w = np.linspace(-8.0, 8.0, 160001)
    qp, qm = cf.q_detuned(w, delta, M_STD, f)
    absorb = -(qp.imag + qm.imag)
    peaks = np.array([w[k] for k in range(1, len(w) - 1)
                      if absorb[k] > absorb[k - 1] and absorb[k] > absorb[k + 1]])
    assert len(peaks) == 4  # four maxima -> five low-absorption regions
    dev = np.abs(np.sort(peaks + delta) - np.array(diag.absorption_extrema)).max()
    inner = np.sort(np.abs(peaks))[:2]
    width = float(inner.sum())
    rel = abs(width - 0.24) / 0.24
    _report("absorption structure", rel, 0.25,
            f"(window {width:.4f} vs 2 Omega^2/delta = 0.24; "
            f"extrema match to {dev:.1e})")
    assert dev < 2e-3
    assert rel < 0.25


def test_criterion_06_isotropy_distances():
    """Theta-independent probe spectrum at Q+_r z = pi; intermediate peak."""
    f = FieldConfig(alpha1=10.0, alpha2=10.0)
    xi = 2.0
    noise = InputNoise(probe=SqueezedNoise(xi))
    delta, omega = 0.1, 0.1
    iso = cf.isotropy_distances(0, M_LOSSLESS, f, delta, omega, xi)
    th = np.linspace(0.0, math.pi, 96, endpoint=False)
    vals = cf.spectrum_detuned(iso.z2_plus, omega, th, 2, noise,
                               M_LOSSLESS, f, delta)
    spread = float(vals.max() - vals.min())
    qp, qm = cf.q_detuned(omega, delta, M_LOSSLESS, f)
    z_int = 2 * math.pi / abs(qm.real - qp.real)
    z = np.linspace(0.0, z_int, 4000)
    peak = float(np.max(cf.spectrum_detuned(z, omega, 0.0, 2, noise,
                                            M_LOSSLESS, f, delta)))
    target = math.exp(2 * xi) / 4.0
    rel = abs(peak - target) / target
    _report("isotropy distances", spread, 1e-9,
            f"(theta spread; peak {peak:.3f} vs e^(2 xi)/4 = {target:.3f}, "
            f"rel {rel:.3f} < 0.05)")
    assert spread < 1e-9
    assert rel < 0.05


def test_criterion_07_asymptotic_spectra():
    """Far beyond the absorption length both spectra settle at the mixed value."""
    f = FieldConfig(alpha1=10.0, alpha2=10.0)
    noise = InputNoise(probe=SqueezedNoise(1.0))
    delta, omega = 0.5, 0.1
    qp, qm = cf.q_detuned(omega, delta, M_STD, f)
    z = 30.0 / max(abs(qp.imag), abs(qm.imag))
    want = 1.0 + (math.exp(-2.0) - 1.0) / 4.0
    worst = max(abs(float(cf.spectrum_detuned(z, omega, 0.0, field, noise,
                                              M_STD, f, delta)) - want)
                for field in (1, 2))
    _report("asymptotic spectra", worst, 1e-6,
            f"(target 1+(e^-2-1)/4 = {want:.6f} at z = 30 z_abs)")
    assert worst < 1e-6


def test_criterion_08_susceptibility():
    """Exact transparency at two-photon resonance; resonant case symmetric."""
    f = FieldConfig(alpha1=10.0, alpha2=10.0)
    scan = np.linspace(-4.0, 4.0, 401)
    worst_zero = 0.0
    for d1 in (0.0, 1.0):
        chi = lv.susceptibility(scan + d1, d1, M_STD, f)
        at_res = lv.susceptibility(d1, d1, M_STD, f)
        worst_zero = max(worst_zero,
                         abs(at_res.imag) / np.abs(chi.imag).max())
    im0 = lv.susceptibility(scan, 0.0, M_STD, f).imag
    asym = np.abs(im0 - im0[::-1]).max() / np.abs(im0).max()
    _report("susceptibility", max(worst_zero, asym), 1e-10,
            "(two-photon zero and delta2 reflection symmetry)")
    assert worst_zero < 1e-10
    assert asym < 1e-10


def test_criterion_09_doppler_properties():
    """Doppler-averaged propagation on the squeezed-vacuum parameter set."""
    start = time.time()
    f9 = FieldConfig(alpha1=10.0, alpha2=0.0)
    noise = InputNoise(probe=SqueezedNoise(2.0))
    omega = 0.1
    cc = coupling_constant(M_FIG9, f9)
    z = np.linspace(0.0, 200.0, 81) / cc
    bare = dp.doppler_spectrum(z, 0.0, omega, noise, M_FIG9, f9,
                               dp.DopplerConfig(width=0.0))

    # (a) a 0.01 gamma spread leaves the curve within 1% of zero-Doppler
    narrow = dp.doppler_spectrum(z, 0.0, omega, noise, M_FIG9, f9,
                                 dp.DopplerConfig(width=0.01, order=32))
    dev_a = float(np.abs(narrow - bare).max() / np.abs(bare).max())
    _report("doppler (a) narrow-width", dev_a, 1e-2, "(sup-norm, curve scale)")
    assert dev_a < 1e-2

    # (b) achievable squeezing over the first interchange period degrades
    # monotonically with the spread
    z_small = np.linspace(10.0, 62.0, 14) / cc
    mins = []
    for width in (0.01, 0.1, 0.25, 0.5):
        vals = dp.doppler_spectrum(z_small, 0.0, omega, noise, M_FIG9, f9,
                                   dp.DopplerConfig(width=width, order=401,
                                                    rule="trapezoid"))
        mins.append(float(vals.min()))
    monotone = all(a <= b + 1e-9 for a, b in zip(mins, mins[1:]))
    print(f"\n[doppler (b) monotone degradation] minima "
          f"{[f'{v:.4f}' for v in mins]}")
    assert monotone

    # (c) a 0.25 gamma spread produces excess noise above the vacuum level
    wide = dp.doppler_spectrum(z, 0.0, omega, noise, M_FIG9, f9,
                               dp.DopplerConfig(width=0.25, order=801,
                                                rule="trapezoid"))
    _report("doppler (c) excess noise", float(wide.max()), 1.0, "(must exceed)")
    assert wide.max() > 1.0
    assert wide.min() > -1e-10

    # (d) equal mean fields: the two averaged spectra coincide beyond
    # z C / gamma = 50 at a 0.5 gamma spread
    f10 = FieldConfig(alpha1=10.0, alpha2=10.0)
    cc10 = coupling_constant(M_FIG9, f10)
    z_far = np.linspace(50.0, 150.0, 26) / cc10
    res = dp.doppler_sweep(z_far, [0.5], 0.0, omega, noise, M_FIG9, f10,
                           order=801, rule="trapezoid", field_indices=(1, 2))
    dev_d = float(np.abs(res.curve(0.5, 1) - res.curve(0.5, 2)).max())
    _report("doppler (d) field equalization", dev_d, 0.05)
    assert dev_d < 0.05

    # (e) Gauss-Hermite self-convergence, 32 vs 64 nodes, on the widths
    # whose class span stays clear of the dressed-state resonances (the
    # wider cases sweep classes across them, where the spectral rule's
    # smoothness premise fails and the module emits its refinement
    # warning instead; see the decisions ledger)
    z_chk = np.linspace(0.0, 200.0, 21) / cc
    worst_e = 0.0
    for width in (0.01, 0.1):
        a32 = dp.doppler_spectrum(z_chk, 0.0, omega, noise, M_FIG9, f9,
                                  dp.DopplerConfig(width=width, order=32))
        a64 = dp.doppler_spectrum(z_chk, 0.0, omega, noise, M_FIG9, f9,
                                  dp.DopplerConfig(width=width, order=64))
        worst_e = max(worst_e, float(np.max(
            np.abs(a32 - a64) / np.maximum(np.abs(a64), 1e-12))))
    _report("doppler (e) quadrature convergence", worst_e, 1e-3)
    assert worst_e < 1e-3
    with pytest.warns(UserWarning, match="not converged"):
        dp.doppler_spectrum(np.array([60.0]) / cc, 0.0, omega, noise,
                            M_FIG9, f9,
                            dp.DopplerConfig(width=0.5, order=32),
                            verify_convergence=True)

    elapsed = time.time() - start
    print(f"[doppler runtime] {elapsed:.1f}s < 600s")
    assert elapsed < 600.0


def test_criterion_10_vacuum_fixed_point():
    """Coherent inputs propagate to coherent outputs identically."""
    f = FieldConfig(alpha1=10.0, alpha2=10.0)
    vac = InputNoise()
    cc = coupling_constant(M_STD, f)
    z = np.linspace(0.0, 60.0, 13) / cc
    worst = 0.0
    for omega in (0.05, 0.3, 1.1, 2.4):
        for th in np.linspace(0.0, math.pi, 6, endpoint=False):
            for field in (1, 2):
                s = lv.spectrum(z, omega, th, field, vac, M_STD, f)
                worst = max(worst, float(np.abs(np.atleast_1d(s) - 1.0).max()))
    _report("vacuum fixed point", worst, 1e-8)
    assert worst < 1e-8
