"""Batch front-end: parameter file in, deterministic CSV data out.

Each experiment writes one CSV per curve family plus a manifest recording
every resolved parameter and the code version.  Grids are dimensionless:
frequencies and detunings in units of gamma, distance as z*C/gamma.
Floats are printed with 17 significant digits and rows in fixed order, so
identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, closedform, langevin
from .doppler import DopplerConfig, doppler_spectrum
from .errors import DomainError, EitfluctError, SingularityError, ConsistencyError
from .medium import (CoherentNoise, FieldConfig, MediumParams,
                     SqueezedNoise, coupling_constant, load_params,
                     rabi_frequencies)

EXPERIMENTS = ("susceptibility", "resonance-spectra", "detuned-spectra",
               "correlations", "diagnostics", "doppler")

USAGE_ERROR, NUMERICAL_ERROR = 1, 2


@dataclass(frozen=True)
class ExperimentSpec:
    """Resolved run request: experiment, inputs, grids and engine."""

    experiment: str
    params_path: str
    out_dir: str
    engine: str
    z_max: float
    z_count: int
    omega: float
    omega_max: float
    omega_count: int
    theta_list: tuple
    theta2_list: tuple
    delta_list: tuple
    ddelta_list: tuple
    delta1_list: tuple
    delta2_max: float
    delta2_count: int
    order: int
    rule: str

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise DomainError(f"unknown experiment {self.experiment!r}")
        if self.engine not in ("closed-form", "langevin", "both"):
            raise DomainError(f"unknown engine {self.engine!r}")
        for name in ("z_count", "omega_count", "delta2_count", "order"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1")
        for name in ("z_max", "omega_max", "delta2_max"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        for name in ("theta_list", "theta2_list", "delta_list",
                     "ddelta_list", "delta1_list"):
            if len(getattr(self, name)) == 0:
                raise DomainError(f"{name} must be non-empty")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _tag(x: float) -> str:
    # column-name token; exact values live in the manifest
    return format(float(x), ".10g").replace("-", "m").replace(".", "p") \
        .replace("+", "")


def _gamma_unit(m: MediumParams) -> float:
    """Frequency unit for the dimensionless grids (1 for a gamma = 0 medium,
    i.e. grids read in absolute rate units there)."""
    return m.gamma if m.gamma > 0.0 else 1.0


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]):
    if len(header) != len(columns):
        raise DomainError("header/column count mismatch")
    n = len(columns[0])
    rows = [",".join(header)]
    for i in range(n):
        rows.append(",".join(_fmt(col[i]) for col in columns))
    path.write_text("\n".join(rows) + "\n")


def read_csv(path) -> tuple[list[str], np.ndarray]:
    lines = Path(path).read_text().strip().splitlines()
    if not lines:
        raise DomainError(f"{path}: empty CSV")
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    if data.size and data.shape[1] != len(header):
        raise DomainError(f"{path}: ragged CSV")
    return header, data


def _threads() -> int:
    raw = os.environ.get("EITFLUCT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise DomainError(f"EITFLUCT_THREADS must be an integer, got {raw!r}")


def _parallel_map(fn, items):
    """Order-preserving map, optionally over a worker pool."""
    n = _threads()
    if n <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# Experiments
# --------------------------------------------------------------------------

def _grids(spec: ExperimentSpec, m: MediumParams, f: FieldConfig):
    gamma = _gamma_unit(m)
    cc = coupling_constant(m, f)
    z_phys = np.linspace(0.0, spec.z_max, spec.z_count) * gamma / cc
    z_dimless = np.linspace(0.0, spec.z_max, spec.z_count)
    omega_phys = spec.omega * gamma
    return cc, z_phys, z_dimless, omega_phys


def _run_susceptibility(spec, m, f, noise, out):
    gamma = _gamma_unit(m)
    scan = np.linspace(-spec.delta2_max, spec.delta2_max, spec.delta2_count)
    header = ["delta2_over_gamma"]
    cols = [scan]
    for d1 in spec.delta1_list:
        chi = langevin.susceptibility(scan * gamma, d1 * gamma, m, f)
        header += [f"re_chi_delta1_{_tag(d1)}", f"im_chi_delta1_{_tag(d1)}"]
        cols += [chi.real, chi.imag]
    write_csv(out / "susceptibility.csv", header, cols)
    return ["susceptibility.csv"]


def _spectra_columns(engine, z_phys, omega_phys, thetas, noise, m, f, delta_phys):
    """(header, columns) of S1/S2 for one detuning, per engine."""
    header, cols = [], []
    engines = ("closed-form", "langevin") if engine == "both" else (engine,)
    for eng in engines:
        prefix = "" if len(engines) == 1 else ("cf_" if eng == "closed-form" else "lv_")
        for theta in thetas:
            for field in (1, 2):
                if eng == "closed-form":
                    if delta_phys == 0.0:
                        vals = closedform.spectrum_resonance(
                            z_phys, omega_phys, theta, field, noise, m, f)
                    else:
                        vals = closedform.spectrum_detuned(
                            z_phys, omega_phys, theta, field, noise, m, f,
                            delta_phys)
                else:
                    ff = FieldConfig(delta1=f.delta1 + delta_phys,
                                     delta2=f.delta2 + delta_phys,
                                     alpha1=f.alpha1, alpha2=f.alpha2)
                    vals = langevin.spectrum(z_phys, omega_phys, theta, field,
                                             noise, m, ff)
                header.append(f"{prefix}S{field}_theta_{_tag(theta)}")
                cols.append(np.atleast_1d(vals))
    return header, cols


def _run_resonance(spec, m, f, noise, out):
    _, z_phys, z_dimless, omega_phys = _grids(spec, m, f)
    header, cols = _spectra_columns(spec.engine, z_phys, omega_phys,
                                    spec.theta_list, noise, m, f, 0.0)
    write_csv(out / "resonance_spectra.csv",
              ["z_C_over_gamma", "omega_over_gamma"] + header,
              [z_dimless, np.full_like(z_dimless, spec.omega)] + cols)
    return ["resonance_spectra.csv"]


def _run_detuned(spec, m, f, noise, out):
    _, z_phys, z_dimless, omega_phys = _grids(spec, m, f)
    names = []
    for d in spec.delta_list:
        header, cols = _spectra_columns(spec.engine, z_phys, omega_phys,
                                        spec.theta_list, noise, m, f,
                                        d * _gamma_unit(m))
        name = f"detuned_spectra_delta_{_tag(d)}.csv"
        write_csv(out / name,
                  ["z_C_over_gamma", "omega_over_gamma", "delta_over_gamma"]
                  + header,
                  [z_dimless, np.full_like(z_dimless, spec.omega),
                   np.full_like(z_dimless, d)] + cols)
        names.append(name)
    return names


def _run_correlations(spec, m, f, noise, out):
    _, z_phys, z_dimless, omega_phys = _grids(spec, m, f)
    if len(spec.theta2_list) != len(spec.theta_list):
        raise DomainError("--theta2-list must pair with --theta-list")
    header, cols = ["z_C_over_gamma"], [z_dimless]
    engines = (("closed-form", "langevin") if spec.engine == "both"
               else (spec.engine,))
    for eng in engines:
        prefix = "" if len(engines) == 1 else ("cf_" if eng == "closed-form" else "lv_")
        for t1, t2 in zip(spec.theta_list, spec.theta2_list):
            if eng == "closed-form":
                vals = closedform.correlation_resonance(
                    z_phys, omega_phys, t1, t2, noise, m, f)
            else:
                vals = langevin.correlation(z_phys, omega_phys, t1, t2,
                                            noise, m, f)
            header.append(f"{prefix}Sc_theta1_{_tag(t1)}_theta2_{_tag(t2)}")
            cols.append(np.atleast_1d(vals))
    write_csv(out / "correlations.csv", header, cols)
    return ["correlations.csv"]


def _run_diagnostics(spec, m, f, noise, out):
    gamma = _gamma_unit(m)
    omegas = np.linspace(-spec.omega_max, spec.omega_max, spec.omega_count)
    names = []
    for d in spec.delta_list:
        qp, qm = closedform.q_detuned(omegas * gamma, d * gamma, m, f)
        name = f"diagnostics_delta_{_tag(d)}.csv"
        write_csv(out / name,
                  ["omega_over_gamma", "qp_r", "qp_i", "qm_r", "qm_i",
                   "abs_qi_sum"],
                  [omegas, qp.real, qp.imag, qm.real, qm.imag,
                   np.abs(qp.imag + qm.imag)])
        names.append(name)
    rows = {"delta_over_gamma": [], "z_abs": [], "z_osc": [], "z_int": [],
            "window_width_over_gamma": [],
            "extremum_1": [], "extremum_2": [], "extremum_3": [], "extremum_4": []}
    for d in spec.delta_list:
        diag = closedform.diagnostics(spec.omega * gamma, d * gamma, m, f)
        rows["delta_over_gamma"].append(d)
        rows["z_abs"].append(diag.z_abs)
        rows["z_osc"].append(diag.z_osc)
        rows["z_int"].append(diag.z_int)
        rows["window_width_over_gamma"].append(
            math.nan if diag.window_width is None else diag.window_width / gamma)
        for k, w in enumerate(diag.absorption_extrema, start=1):
            rows[f"extremum_{k}"].append(w / gamma)
    write_csv(out / "diagnostics_summary.csv", list(rows),
              [np.asarray(v, dtype=float) for v in rows.values()])
    names.append("diagnostics_summary.csv")
    return names


def _doppler_task(args):
    (width, z_phys, theta, omega_phys, m, f, noise, order, rule, fields) = args
    cfg = DopplerConfig(width=width, order=order, rule=rule)
    curves = [doppler_spectrum(z_phys, theta, omega_phys, noise, m, f, cfg,
                               field_index=fi) for fi in fields]
    return curves


def _run_doppler(spec, m, f, noise, out):
    gamma = _gamma_unit(m)
    _, z_phys, z_dimless, omega_phys = _grids(spec, m, f)
    theta = spec.theta_list[0]
    fields = (1, 2) if f.alpha1 > 0.0 and f.alpha2 > 0.0 else (2,)
    tasks = [(w * gamma, z_phys, theta, omega_phys, m, f, noise,
              spec.order, spec.rule, fields) for w in spec.ddelta_list]
    results = _parallel_map(_doppler_task, tasks)
    header, cols = ["z_C_over_gamma"], [z_dimless]
    for w, curves in zip(spec.ddelta_list, results):
        for fi, vals in zip(fields, curves):
            header.append(f"S{fi}_ddelta_{_tag(w)}")
            cols.append(np.atleast_1d(vals))
    write_csv(out / "doppler.csv", header, cols)
    return ["doppler.csv"]


_RUNNERS = {
    "susceptibility": _run_susceptibility,
    "resonance-spectra": _run_resonance,
    "detuned-spectra": _run_detuned,
    "correlations": _run_correlations,
    "diagnostics": _run_diagnostics,
    "doppler": _run_doppler,
}


def run(spec: ExperimentSpec) -> list[str]:
    """Execute one experiment; returns the list of CSV files written."""
    m, f, noise = load_params(spec.params_path)
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = _RUNNERS[spec.experiment](spec, m, f, noise, out)
    o1, o2, _ = rabi_frequencies(m, f)

    def noise_kind(model):
        if isinstance(model, CoherentNoise):
            return {"kind": "coherent"}
        if isinstance(model, SqueezedNoise):
            return {"kind": "squeezed", "xi": model.xi}
        return {"kind": type(model).__name__}

    manifest = {
        "version": __version__,
        "experiment": spec.experiment,
        "engine": spec.engine,
        "params_file": str(spec.params_path),
        "medium": {"gamma1": m.gamma1, "gamma2": m.gamma2, "gamma12": m.gamma12,
                   "g1": m.g1, "g2": m.g2, "N": m.atom_number,
                   "L": m.medium_length, "c": m.light_speed},
        "fields": {"delta1": f.delta1, "delta2": f.delta2,
                   "alpha1": f.alpha1, "alpha2": f.alpha2,
                   "rabi1": o1, "rabi2": o2},
        "noise": {"pump": noise_kind(noise.pump), "probe": noise_kind(noise.probe)},
        "coupling_constant": coupling_constant(m, f),
        "grids": {"z_max": spec.z_max, "z_count": spec.z_count,
                  "omega": spec.omega, "omega_max": spec.omega_max,
                  "omega_count": spec.omega_count,
                  "theta_list": list(spec.theta_list),
                  "theta2_list": list(spec.theta2_list),
                  "delta_list": list(spec.delta_list),
                  "ddelta_list": list(spec.ddelta_list),
                  "delta1_list": list(spec.delta1_list),
                  "delta2_max": spec.delta2_max,
                  "delta2_count": spec.delta2_count,
                  "order": spec.order, "rule": spec.rule},
        "float_format": ".17g",
        "outputs": names,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return names


def diff(file_a, file_b, tolerance: float) -> tuple[bool, list[str]]:
    """Per-column max-abs/max-rel deviations; ok iff within tolerance."""
    header_a, data_a = read_csv(file_a)
    header_b, data_b = read_csv(file_b)
    if header_a != header_b:
        raise DomainError(f"schema mismatch: {header_a} vs {header_b}")
    if data_a.shape != data_b.shape:
        raise DomainError(f"shape mismatch: {data_a.shape} vs {data_b.shape}")
    ok = True
    report = []
    for k, name in enumerate(header_a):
        a, b = data_a[:, k], data_b[:, k]
        abs_dev = float(np.nanmax(np.abs(a - b))) if a.size else 0.0
        scale = np.maximum(np.abs(a), np.abs(b))
        with np.errstate(invalid="ignore", divide="ignore"):
            rel = np.abs(a - b) / scale
        rel_dev = float(np.nanmax(np.where(scale > 0, rel, 0.0))) if a.size else 0.0
        col_ok = abs_dev <= tolerance or rel_dev <= tolerance
        ok = ok and col_ok
        report.append(f"{name}: max_abs={abs_dev:.3e} max_rel={rel_dev:.3e}"
                      f" {'ok' if col_ok else 'EXCEEDS'}")
    return ok, report


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eitfluct",
                 description="Quadrature-noise spectra of pump/probe fields "
                             "in a Lambda EIT medium")
    sub = ap.add_subparsers(dest="command", required=True)

    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--params", required=True, help="parameter file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--engine", default="closed-form",
                       choices=("closed-form", "langevin", "both"))
        p.add_argument("--z-max", type=float, default=30.0,
                       help="max distance in z*C/gamma units")
        p.add_argument("--z-count", type=int, default=301)
        p.add_argument("--omega", type=float, default=0.1,
                       help="spectrum frequency in gamma units")
        p.add_argument("--omega-max", type=float, default=4.0)
        p.add_argument("--omega-count", type=int, default=401)
        p.add_argument("--theta-list", type=_float_list, default=(0.0,))
        p.add_argument("--theta2-list", type=_float_list, default=())
        p.add_argument("--delta-list", type=_float_list, default=(0.5,))
        p.add_argument("--ddelta-list", type=_float_list,
                       default=(0.01, 0.1, 0.25, 0.5))
        p.add_argument("--delta1-list", type=_float_list, default=(0.0, 1.0))
        p.add_argument("--delta2-max", type=float, default=4.0)
        p.add_argument("--delta2-count", type=int, default=401)
        p.add_argument("--order", type=int, default=32,
                       help="Doppler quadrature order / node count")
        p.add_argument("--rule", default="gauss-hermite",
                       choices=("gauss-hermite", "trapezoid"))

    d = sub.add_parser("diff")
    d.add_argument("file_a")
    d.add_argument("file_b")
    d.add_argument("--tolerance", type=float, default=1e-12)
    return ap


def _spec_from_args(args) -> ExperimentSpec:
    theta2 = args.theta2_list if args.theta2_list else args.theta_list
    return ExperimentSpec(
        experiment=args.command, params_path=args.params, out_dir=args.out,
        engine=args.engine, z_max=args.z_max, z_count=args.z_count,
        omega=args.omega, omega_max=args.omega_max,
        omega_count=args.omega_count, theta_list=args.theta_list,
        theta2_list=theta2, delta_list=args.delta_list,
        ddelta_list=args.ddelta_list, delta1_list=args.delta1_list,
        delta2_max=args.delta2_max, delta2_count=args.delta2_count,
        order=args.order, rule=args.rule)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "diff":
            ok, report = diff(args.file_a, args.file_b, args.tolerance)
            print("\n".join(report))
            return 0 if ok else USAGE_ERROR
        spec = _spec_from_args(args)
        names = run(spec)
        print(f"wrote {', '.join(names)} and manifest.json to {spec.out_dir}")
        return 0
    except (SingularityError, ConsistencyError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except (EitfluctError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
