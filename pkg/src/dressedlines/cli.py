"""Command-line entry point: ``dressedlines <subcommand> ...``.

Exit status 0 on success, 1 on domain or fitting errors, 2 on usage errors.
Errors go to stderr prefixed with ``error:``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import analysis, collective, jc, lindblad, mollow, resonator
from .errors import DomainError, MultiplicityError, NoFitError, SpectrumParseError
from .units import SpectralValue, cm1_to_nm, convert, normalize_unit, parse_quantity

DEFAULT_PRECISION = 6


class _Fmt:
    def __init__(self, digits):
        self.digits = digits

    def __call__(self, x):
        if x is None:
            return "-"
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            return str(int(x))
        if isinstance(x, (float, np.floating)):
            return f"{float(x):.{self.digits}g}"
        return str(x)


def _table(rows, columns, fmt):
    cells = [[c for c in columns]] + [[fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]


def _clean(obj):
    """Make a record strictly JSON-serializable (no NaN/inf, no numpy scalars)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def _q(default_unit):
    def parse(text):
        try:
            return parse_quantity(text, default_unit)
        except DomainError as e:
            raise argparse.ArgumentTypeError(str(e)) from None

    return parse


def _k(v: SpectralValue) -> float:
    return convert(v, "cm-1").magnitude


def _write_columns(path, x, y, header):
    arr = np.column_stack([x, y])
    np.savetxt(path, arr, delimiter=",", header=header, fmt="%.10g")


# ---------------------------------------------------------------- handlers


def cmd_convert(args, fmt):
    v = args.value
    if args.from_unit:
        v = SpectralValue(v.magnitude, args.from_unit)
    out = convert(v, args.to_unit)
    rec = {"input": {"value": v.magnitude, "unit": v.unit}, "value": out.magnitude, "unit": out.unit}
    return rec, [fmt(out.magnitude)]


def cmd_geometry(args, fmt):
    geom = resonator.ResonatorGeometry(args.d_nm, args.r_nm)
    gap = resonator.interfacial_gap(geom)
    vol = resonator.mode_volume_cylinder(geom)
    lam = SpectralValue(args.lambda_nm, "nm")
    field = resonator.vacuum_field_amplitude(lam, vol)
    g = resonator.coupling_rate_from_dipole(args.dipole_debye, field)
    fp = resonator.purcell_factor(lam, args.n, args.q, vol)
    rec = {
        "gap_nm": gap,
        "mode_volume_nm3": vol,
        "vacuum_field_v_per_m": field.amplitude,
        "coupling_cm1": g.magnitude,
        "purcell_factor": fp,
    }
    return rec, [f"{k:>22}  {fmt(v)}" for k, v in rec.items()]


def cmd_purcell(args, fmt):
    fp = resonator.purcell_factor(SpectralValue(args.lambda_nm, "nm"), args.n, args.q, args.volume_nm3)
    return {"purcell_factor": fp}, [fmt(fp)]


def cmd_jc_ladder(args, fmt):
    p = jc.JCParameters(_k(args.omega_mode), _k(args.omega_atom), _k(args.g))
    rows = [
        {"n": d.n, "E_plus_cm1": d.e_plus, "E_minus_cm1": d.e_minus, "splitting_cm1": d.splitting}
        for d in jc.ladder(p, args.n_max)
    ]
    return {"rows": rows}, _table(rows, list(rows[0]), fmt)


def cmd_doublet(args, fmt):
    pp, pm = jc.rabi_doublet_lines(_k(args.omega0), _k(args.omega))
    rec = {"p_plus_cm1": pp, "p_plus_nm": cm1_to_nm(pp), "p_minus_cm1": pm, "p_minus_nm": cm1_to_nm(pm)}
    return rec, _table([rec], list(rec), fmt)


def cmd_collective(args, fmt):
    w0, coupling = _k(args.omega0), _k(args.coupling)
    rows = []
    if args.model == "nsqrtn":
        m = collective.CollectiveModel(1, coupling, w0)
        for n, pp, pm in collective.collective_doublet_ladder(m, args.n_max):
            rows.append({"N": n, "splitting_cm1": pp - pm, "p_plus_cm1": pp, "p_plus_nm": cm1_to_nm(pp),
                         "p_minus_cm1": pm, "p_minus_nm": cm1_to_nm(pm)})
    else:
        for n in range(1, args.n_max + 1):
            split = collective.tc_bright_splitting(collective.TCProblem(n, w0, w0, coupling)).magnitude
            pp, pm = jc.rabi_doublet_lines(w0, split)
            rows.append({"N": n, "splitting_cm1": split, "p_plus_cm1": pp, "p_plus_nm": cm1_to_nm(pp),
                         "p_minus_cm1": pm, "p_minus_nm": cm1_to_nm(pm) if pm > 0 else None})
    return {"model": args.model, "omega0_cm1": w0, "coupling_cm1": coupling, "rows": rows}, _table(rows, list(rows[0]), fmt)


def cmd_eta(args, fmt):
    a = collective.assess_coupling(_k(args.splitting), _k(args.omega0))
    rec = {"splitting_cm1": a.splitting, "omega0_cm1": a.omega0, "eta": a.eta, "regime": a.regime}
    return rec, [f"eta = {fmt(a.eta)} ({a.regime})"]


def cmd_mollow(args, fmt):
    lad = mollow.MollowLadder(_k(args.omega0), _k(args.omega_prime), tuple(range(0, args.orders + 1)))
    rows = mollow.ladder_table(lad)
    cols = ["order"]
    if args.side in ("red", "both"):
        cols += ["red_cm1", "red_nm"]
    if args.side in ("blue", "both"):
        cols += ["blue_cm1", "blue_nm"]
    rows = [{c: r[c] for c in cols} for r in rows]
    return {"omega0_cm1": lad.omega0, "omega_prime_cm1": lad.spacing, "side": args.side, "rows": rows}, _table(rows, cols, fmt)


def _spectrum_summary(spec, extra=None):
    peaks = lindblad.find_spectral_peaks(spec)
    rec = {"peaks": [{"offset_cm1": x, "height": h} for x, h in peaks]}
    if peaks:
        centre = min(peaks, key=lambda p: abs(p[0]))
        sides = [p for p in peaks if p is not centre]
        if sides:
            rec["central_to_sideband_ratio"] = centre[1] / max(h for _, h in sides)
    rec.update(extra or {})
    return rec


def _summary_lines(rec, fmt):
    lines = [f"{'offset_cm1':>12}  {'height':>12}"]
    lines += [f"{fmt(p['offset_cm1']):>12}  {fmt(p['height']):>12}" for p in rec["peaks"]]
    for k, v in rec.items():
        if k != "peaks":
            lines.append(f"{k} = {fmt(v)}")
    return lines


def cmd_mollow_spectrum(args, fmt):
    span = args.span or 3 * args.rabi
    grid = np.linspace(-span, span, args.grid_points)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = mollow.asymptotic_mollow_spectrum(mollow.DriveField(0.0, args.rabi), args.gamma, grid)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.output:
        _write_columns(args.output, spec.omega, spec.intensity, "offset_cm1,intensity")
    rec = _spectrum_summary(spec, {"reliable": spec.reliable})
    return rec, _summary_lines(rec, fmt)


def cmd_simulate(args, fmt):
    if args.kind == "mollow":
        sim = lindblad.simulate_mollow(args.rabi, args.gamma, args.detuning, n_grid=args.grid, tmax=args.tmax)
        if args.output:
            _write_columns(args.output, sim.spectrum.omega, sim.spectrum.intensity, "offset_cm1,intensity")
        rec = _spectrum_summary(sim.spectrum, {"excited_population": sim.excited_population})
        return rec, _summary_lines(rec, fmt)
    p = lindblad.driven_tls_problem(args.rabi, args.detuning, args.gamma)
    tmax = args.tmax or 40.0 / args.gamma
    tau = np.linspace(0.0, tmax, args.grid)
    g2 = lindblad.correlation_g2(p, tau)
    if args.output:
        _write_columns(args.output, tau, g2, "tau,g2")
    rec = {"g2_zero": g2[0], "g2_end": g2[-1], "g2_max": g2.max(), "tau_at_max": tau[int(np.argmax(g2))]}
    return rec, [f"{k} = {fmt(v)}" for k, v in rec.items()]


def cmd_analyze(args, fmt):
    s = analysis.load_spectrum(Path(args.input))
    peaks = analysis.detect_peaks(s, args.min_prominence)
    a = analysis.assign_ladder(peaks, args.model, _k(args.omega0), args.tolerance)
    rec = a.as_record()
    lines = [
        f"model {a.family}: omega0 = {fmt(a.omega0)} cm-1 ({fmt(cm1_to_nm(a.omega0))} nm), "
        f"coupling = {fmt(a.constant)} +/- {fmt(a.constant_err)} cm-1",
        f"eta = {fmt(rec['eta'])} ({rec['regime']}), rms residual = {fmt(a.rms_residual)} cm-1",
    ]
    lines += _table(rec["matches"], ["peak_cm1", "peak_nm", "order", "side", "predicted_cm1", "residual_cm1"], fmt)
    return rec, lines


def cmd_delta_a(args, fmt):
    da = analysis.delta_a(analysis.load_spectrum(Path(args.oxidized)), analysis.load_spectrum(Path(args.neutral)))
    if args.output:
        _write_columns(args.output, da.wavelength, da.intensity, "wavelength_nm,delta_a")
    res = analysis.rabi_from_bleach(da, _k(args.dark))
    rec = res.as_record()
    return rec, [f"{k:>14}  {fmt(v)}" for k, v in rec.items()]


def cmd_distance(args, fmt):
    e = analysis.mean_distance(args.c_mm, args.calibration)
    rec = {"concentration_mm": e.concentration_mm, "calibration": e.calibration, "distance_angstrom": e.mean_distance}
    return rec, [f"{fmt(e.mean_distance)} angstrom"]


def cmd_fit_scaling(args, fmt):
    try:
        data = np.loadtxt(args.input, delimiter=",", comments="#", ndmin=2)
    except ValueError as e:
        raise DomainError(f"cannot read {args.input}: {e}") from None
    f = analysis.scaling_fit(data, args.law)
    rec = {"law": f.law, "slope": f.slope, "intercept": f.intercept, "r_squared": f.r_squared}
    return rec, [f"{k:>10}  {fmt(v)}" for k, v in rec.items()]


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit a JSON record")
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="significant digits in tables")

    parser = argparse.ArgumentParser(prog="dressedlines", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", default=False)
    parser.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("convert", cmd_convert, "convert between nm, cm-1, eV and rad/s")
    p.add_argument("--value", type=_q("cm-1"), required=True)
    p.add_argument("--from", dest="from_unit", type=normalize_unit)
    p.add_argument("--to", dest="to_unit", type=normalize_unit, required=True)

    p = add("geometry", cmd_geometry, "gap, mode volume, vacuum field and coupling of a two-ion resonator")
    p.add_argument("--d-nm", type=float, required=True)
    p.add_argument("--r-nm", type=float, required=True)
    p.add_argument("--dipole-debye", type=float, default=1.0)
    p.add_argument("--lambda-nm", type=float, default=380.0)
    p.add_argument("--q", type=float, default=7.0)
    p.add_argument("--n", type=float, default=1.0)

    p = add("purcell", cmd_purcell, "Purcell factor")
    p.add_argument("--lambda-nm", type=float, required=True)
    p.add_argument("--n", type=float, default=1.0)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--volume-nm3", type=float, required=True)

    p = add("jc-ladder", cmd_jc_ladder, "Jaynes-Cummings dressed-state energies")
    p.add_argument("--omega-mode", type=_q("cm-1"), required=True)
    p.add_argument("--omega-atom", type=_q("cm-1"), required=True)
    p.add_argument("--g", type=_q("cm-1"), required=True)
    p.add_argument("--n-max", type=int, default=4)

    p = add("doublet", cmd_doublet, "Rabi doublet lines about a resonance")
    p.add_argument("--omega0", type=_q("cm-1"), required=True)
    p.add_argument("--omega", type=_q("cm-1"), required=True)

    p = add("collective", cmd_collective, "collective doublet ladder")
    p.add_argument("--omega0", type=_q("cm-1"), required=True)
    p.add_argument("--coupling", type=_q("cm-1"), required=True,
                   help="single-emitter splitting (nsqrtn) or coupling g (tavis-cummings)")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--model", choices=["nsqrtn", "tavis-cummings"], default="nsqrtn")

    p = add("eta", cmd_eta, "normalized coupling rate and regime")
    p.add_argument("--splitting", type=_q("cm-1"), required=True)
    p.add_argument("--omega0", type=_q("cm-1"), required=True)

    p = add("mollow", cmd_mollow, "Mollow sideband ladder")
    p.add_argument("--omega0", type=_q("cm-1"), required=True)
    p.add_argument("--omega-prime", type=_q("cm-1"), required=True)
    p.add_argument("--orders", type=int, default=3)
    p.add_argument("--side", choices=["red", "blue", "both"], default="both")

    p = add("mollow-spectrum", cmd_mollow_spectrum, "strong-drive three-Lorentzian spectrum")
    p.add_argument("--rabi", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--grid-points", type=int, default=1201)
    p.add_argument("--span", type=float)
    p.add_argument("--output", type=Path)

    p = add("simulate", cmd_simulate, "master-equation resonance fluorescence")
    p.add_argument("kind", choices=["mollow", "g2"])
    p.add_argument("--rabi", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--detuning", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=1201)
    p.add_argument("--tmax", type=float)
    p.add_argument("--output", type=Path)

    p = add("analyze", cmd_analyze, "detect peaks and assign a line ladder")
    p.add_argument("--input", required=True)
    p.add_argument("--model", choices=sorted(analysis.FAMILIES), required=True)
    p.add_argument("--omega0", type=_q("cm-1"), required=True)
    p.add_argument("--tolerance", type=float, default=analysis.DEFAULT_TOLERANCE)
    p.add_argument("--min-prominence", type=float, default=0.05)

    p = add("delta-a", cmd_delta_a, "oxidized-minus-neutral difference and bleach splitting")
    p.add_argument("--oxidized", required=True)
    p.add_argument("--neutral", required=True)
    p.add_argument("--dark", type=_q("cm-1"), required=True)
    p.add_argument("--output", type=Path)

    p = add("distance", cmd_distance, "mean intermolecular distance from concentration")
    p.add_argument("--c-mm", type=float, required=True)
    p.add_argument("--calibration", type=float, default=1.0)

    p = add("fit-scaling", cmd_fit_scaling, "fit coupling against sqrt(C) or C^(3/2)")
    p.add_argument("--input", required=True)
    p.add_argument("--law", choices=sorted(analysis.LAWS), required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = _Fmt(args.precision)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", lindblad.TruncationWarning)
            record, lines = args.func(args, fmt)
    except (DomainError, NoFitError, MultiplicityError, SpectrumParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(_clean(record), sort_keys=True, allow_nan=False))
    else:
        print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
