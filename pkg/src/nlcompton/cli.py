"""Command-line front end.

Every subcommand writes CSV (default) or JSON (``--json``) to standard output
or to ``--output``; diagnostics go to standard error.  Exit status is 0 on
success, 2 for invalid input and 3 for numerical-domain failures.

CSV layout
----------
The first line names the schema and its columns, for example ::

    # nlc-xsec v1 columns: a0,k,E,p_z,harmonic,theta,sigma,sigma_out,pol,n_occ,kprime,value

Further ``#`` lines carry notes.  Floats are written in scientific notation
with 15 significant digits; the environment variable ``NLCOMPTON_DIGITS``
changes the digit count.  JSON output holds the same fields as an object
``{"schema", "columns", "rows", "notes"}``.

Cross-section values are in Compton-wavelength-squared per steradian for a
laser volume of one Compton wavelength cubed (``--barn`` converts the area).

Config files
------------
Each subcommand accepts ``--config FILE`` with ``key = value`` lines, ``#``
comments and keys named after the long flags (``n-occ`` or ``n_occ``).
Command-line flags override file values; unknown keys are errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import cross_sections as xs
from .amplitudes import fg_coefficients
from .bessel import METHODS, bessel_j_eval
from .constants import COMPTON_AREA_BARN, COMPTON_WAVELENGTH_M
from .errors import DomainError, NLComptonError, ValidationError
from .gain import gain_parameter, photon_number_closed, photon_number_trajectory
from .kinematics import (
    Channel,
    ElectronIn,
    LaserParams,
    emitted_photon_energy,
    kinematic_residuals,
    laser_flux_si,
    scattered_state,
)
from .modes import (
    GridSpec,
    ModeQuantumNumbers,
    dirac_self_test,
    mode_sum_reconstruction,
    residual_convergence,
    wolkow_psi_r,
)

DIGITS_ENV = "NLCOMPTON_DIGITS"
DEFAULT_DIGITS = 15

XSEC_COLUMNS = ("a0", "k", "E", "p_z", "harmonic", "theta", "sigma", "sigma_out", "pol",
                "n_occ", "kprime", "value")

#: Reference rows: harmonic, k' and spin-averaged i = 1 cross section.
REFERENCE_TABLES = {
    1: dict(a0=1.5e-2, k=3.09e-6, E=7.0e3, theta=3.14,
            rows=((1, 2.648, 2.27e-9), (2, 5.28, 9.99e-13), (3, 7.89, 4.18e-16))),
    2: dict(a0=10.5, k=4.43e-9, E=7.0e3, theta=3.14,
            rows=((1, 7.76e-5, 4.17e-8), (2, 1.55e-4, 3.67e-9), (3, 2.33e-4, 3.05e-10),
                  (523, 1.90, 1.08e-8))),
}

FIGURE_THETAS = (2.8, 3.0, 3.13, 3.14)
FIGURE_ENERGY = 300.0
FIGURE_K = 3.09e-6


# --- output ---------------------------------------------------------------------------

def _digits():
    raw = os.environ.get(DIGITS_ENV)
    if raw is None or raw == "":
        return DEFAULT_DIGITS
    try:
        d = int(raw)
    except ValueError:
        raise ValidationError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None
    if not 1 <= d <= 17:
        raise ValidationError(f"{DIGITS_ENV} must lie in 1..17, got {d}")
    return d


def _fmt(value, digits):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits - 1}e}"
    return str(value)


def _jsonable(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    return value


@dataclasses.dataclass
class Table:
    schema: str
    columns: tuple
    rows: list
    notes: list = dataclasses.field(default_factory=list)


def _render(tables, as_json):
    if as_json:
        payload = [{"schema": t.schema, "columns": list(t.columns),
                    "rows": [{c: _jsonable(v) for c, v in zip(t.columns, r)} for r in t.rows],
                    "notes": list(t.notes)} for t in tables]
        return json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n"
    digits = _digits()
    buf = io.StringIO()
    for t in tables:
        buf.write(f"# {t.schema} columns: {','.join(t.columns)}\n")
        for note in t.notes:
            buf.write(f"# {note}\n")
        writer = csv.writer(buf, lineterminator="\n")
        for r in t.rows:
            writer.writerow([_fmt(v, digits) for v in r])
    return buf.getvalue()


def _emit(args, tables, stdout):
    text = _render(tables, args.json)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


# --- config ------------------------------------------------------------------------------

def load_config(path):
    """Read ``key = value`` lines into ``{key: (value, line_number)}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for no, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ValidationError(f"{path}:{no}: expected 'key = value'")
        key, value = (s.strip() for s in text.split("=", 1))
        if not key:
            raise ValidationError(f"{path}:{no}: empty key")
        out[key.replace("-", "_")] = (value, no)
    return out


_BOOL = {"true": True, "yes": True, "1": True, "on": True,
         "false": False, "no": False, "0": False, "off": False}


def _convert(action, raw, where):
    try:
        if action.nargs == 0:
            if raw.lower() not in _BOOL:
                raise ValueError(raw)
            return _BOOL[raw.lower()]
        conv = action.type or str
        if action.nargs in ("+", "*"):
            values = [conv(v) for v in raw.replace(",", " ").split()]
            bad = [v for v in values if action.choices is not None and v not in action.choices]
        else:
            values = conv(raw)
            bad = [values] if action.choices is not None and values not in action.choices else []
    except (ValueError, TypeError, argparse.ArgumentTypeError):
        raise ValidationError(f"{where}: invalid value {raw!r} for '{action.dest}'") from None
    if bad:
        raise ValidationError(f"{where}: value {bad[0]!r} for '{action.dest}' is not an allowed choice")
    return values


def _apply_config(sub, path):
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    defaults = {}
    for key, (raw, no) in load_config(path).items():
        if key not in actions:
            raise ValidationError(f"{path}:{no}: unknown key '{key}'")
        defaults[key] = _convert(actions[key], raw, f"{path}:{no}")
    sub.set_defaults(**defaults)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ValidationError(f"missing required setting(s): {flags}")


# --- argument helpers ------------------------------------------------------------------------

def _grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError("grid must look like start:stop:count") from None
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    return start, stop, count


def _grid_values(spec):
    start, stop, count = spec
    return [float(v) for v in np.linspace(start, stop, count)]


def _pol(text):
    if text in ("1", "2"):
        return int(text)
    if text == "unpolarized":
        return text
    raise argparse.ArgumentTypeError("pol must be 1, 2 or unpolarized")


def _spin(text):
    v = int(text)
    if v not in (1, -1):
        raise argparse.ArgumentTypeError("spin must be +1 or -1")
    return v


def _add_physics(p, harmonic=True, theta=True):
    p.add_argument("--a0", type=float, help="laser amplitude eA/m")
    p.add_argument("--k", type=float, help="laser photon energy / m")
    p.add_argument("--energy", type=float, help="electron energy E / m")
    p.add_argument("--pz", type=float, default=None,
                   help="electron p_z / m (default: head-on, -sqrt(E^2 - 1))")
    if harmonic:
        p.add_argument("--harmonic", type=int, default=1, help="harmonic number N")
    if theta:
        p.add_argument("--theta", type=float, help="emission angle in radians")


def _add_xsec_options(p):
    p.add_argument("--pol", type=_pol, default=1, help="1, 2 or unpolarized")
    p.add_argument("--averaged", action="store_true", help="average over the incident spin")
    p.add_argument("--sigma", type=_spin, default=1, help="incident spin (+1 or -1)")
    p.add_argument("--sigma-out", type=_spin, default=1, help="outgoing spin (+1 or -1)")
    p.add_argument("--n-occ", type=int, default=0, help="photon occupation before emission")
    p.add_argument("--barn", action="store_true", help="report the area in barns")


def _add_common(p):
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p.add_argument("--output", "-o", help="write to a file instead of standard output")


# --- cross-section rows ----------------------------------------------------------------------

def _xsec_point(args):
    return dict(a0=args.a0, k=args.k, E=args.energy, p_z=args.pz, harmonic=args.harmonic,
                theta=args.theta, pol=args.pol, averaged=args.averaged, sigma=args.sigma,
                sigma_out=args.sigma_out, n_occ=args.n_occ, barn=args.barn)


def _context(point):
    return xs.XSecContext(LaserParams(point["a0"], point["k"]),
                          ElectronIn(point["E"], point["p_z"], point["sigma"]),
                          Channel(point["harmonic"], point["theta"], point["n_occ"]))


def _xsec_row(point):
    """One CSV row for a cross-section point; top level so workers can pickle it."""
    ctx = _context(point)
    pol = point["pol"]
    if pol == "unpolarized":
        rec = xs.dsigma_unpolarized(ctx, averaged=point["averaged"])
    elif point["averaged"]:
        rec = xs.dsigma_spin_averaged(ctx, pol)
    else:
        rec = xs.dsigma_fixed_spins(ctx, point["sigma_out"], pol)
    value = float(rec.value) * (COMPTON_AREA_BARN if point["barn"] else 1.0)
    e = ctx.electron
    return (float(ctx.laser.a0), float(ctx.laser.k), float(e.E), float(e.p_z), rec.harmonic,
            float(rec.theta), rec.sigma, rec.sigma_out, rec.pol, rec.n_occ,
            float(rec.kinematics.kprime), value)


def _unit_note(barn):
    return ("value unit: barn per sr per lambda_c^3 of laser" if barn
            else "value unit: lambda_c^2 per sr per lambda_c^3 of laser")


def _amplitude_table(ctx):
    rows = []
    for s in (1, -1):
        el = dataclasses.replace(ctx.electron, sigma=s)
        kin = scattered_state(ctx.laser, el, ctx.channel)
        amps = fg_coefficients(kin, el)
        orders = amps.orders()
        for block, coeffs in (("F", amps.F), ("G", amps.G)):
            for i in (1, 2):
                for nu in (0, s, -s):
                    c = complex(coeffs[i][nu])
                    rows.append((s, block, i, nu, orders[nu], c.real, c.imag))
    return Table("nlc-amplitudes v1", ("sigma", "block", "i", "nu", "bessel_order", "re", "im"),
                 rows, [f"bessel argument p'_perp R' = {kin.bessel_argument!r}"])


def cmd_xsec(args, stdout):
    _require(args, "a0", "k", "energy", "theta")
    point = _xsec_point(args)
    ctx = _context(point)
    tables = [Table("nlc-xsec v1", XSEC_COLUMNS, [_xsec_row(point)], [_unit_note(args.barn)])]
    if args.dump_amplitudes:
        tables.append(_amplitude_table(ctx))
    _emit(args, tables, stdout)


SWEEP_AXES = {"a0": "a0", "k": "k", "energy": "E", "theta": "theta", "harmonic": "harmonic",
              "n-occ": "n_occ"}


def _sweep_values(args):
    if args.count < 1:
        raise ValidationError("--count must be >= 1")
    if args.scale == "log":
        if args.start <= 0 or args.stop <= 0:
            raise ValidationError("log sweeps need positive --start and --stop")
        values = np.logspace(math.log10(args.start), math.log10(args.stop), args.count)
    else:
        values = np.linspace(args.start, args.stop, args.count)
    if args.axis in ("harmonic", "n-occ"):
        ints = [int(round(v)) for v in values]
        if any(abs(i - v) > 1e-9 for i, v in zip(ints, values)):
            raise ValidationError(f"--axis {args.axis} needs integer grid values")
        return ints
    return [float(v) for v in values]


def cmd_sweep(args, stdout):
    _require(args, "axis", "start", "stop")
    base = _xsec_point(args)
    key = SWEEP_AXES[args.axis]
    points = []
    for v in _sweep_values(args):
        p = dict(base)
        p[key] = v
        points.append(p)
    for p in points:
        _require_point(p)
        _context(p)
    if args.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_xsec_row, points))
    else:
        rows = [_xsec_row(p) for p in points]
    notes = [f"sweep over {args.axis}: {args.count} points, {args.scale} scale",
             _unit_note(args.barn)]
    _emit(args, [Table("nlc-xsec v1", XSEC_COLUMNS, rows, notes)], stdout)


def _require_point(p):
    missing = [k for k in ("a0", "k", "E", "theta") if p[k] is None]
    if missing:
        raise ValidationError(f"missing required setting(s): {', '.join(missing)}")


# --- Klein-Nishina and figures -------------------------------------------------------------

def cmd_kn_compare(args, stdout):
    rows = []
    for theta in args.theta:
        for pol in args.pol_index:
            for a0 in args.a0:
                lab = xs.y_of_x_curve(args.energy, args.k, theta, pol, [a0])[0]
                cov = xs.y_of_x_curve(args.energy, args.k, theta, pol, [a0],
                                      baseline="covariant")[0]
                rows.append((theta, pol, a0, lab.w3, lab.kn, cov.kn,
                             lab.w3 / lab.kn, cov.w3 / cov.kn))
    notes = [f"E = {args.energy!r}, k = {args.k!r}, harmonic 1, spin-averaged",
             "kn_lab uses |e.e'_1|^2 = cos^2(theta)/2; kn_covariant the rest-frame overlap"]
    cols = ("theta", "pol", "a0", "w3", "kn_lab", "kn_covariant", "ratio_lab",
            "ratio_covariant")
    _emit(args, [Table("nlc-kn v1", cols, rows, notes)], stdout)


def cmd_figure_data(args, stdout):
    xs_grid = _grid_values(args.grid)
    a0_grid = [10.0**x for x in xs_grid]
    rows = []
    for theta in args.theta:
        for x, pt in zip(xs_grid, xs.y_of_x_curve(args.energy, args.k, theta, args.figure,
                                                   a0_grid, baseline=args.baseline)):
            y = pt.Y if pt.Y is not None else math.nan
            rows.append((theta, x, y, pt.w3, pt.kn, pt.note))
    notes = [f"Y({args.figure}) = log10((KN - w3)/KN) against X = log10(a0); "
             f"E = {args.energy!r}, k = {args.k!r}, baseline = {args.baseline}",
             "rows with a note were skipped (Y = nan)"]
    _emit(args, [Table("nlc-figure v1", ("theta", "X", "Y", "w3", "kn", "note"), rows, notes)],
          stdout)


# --- tables, flux ---------------------------------------------------------------------------

def _relative(computed, reference):
    return computed / reference - 1.0


def table_rows(which):
    """Comparison rows for the reference tables; never fails on a mismatch."""
    rows = []
    for t in which:
        spec = REFERENCE_TABLES[t]
        laser = LaserParams(spec["a0"], spec["k"])
        electron = ElectronIn(spec["E"])
        for n, kp_ref, xs_ref in spec["rows"]:
            channel = Channel(n, spec["theta"])
            kin = scattered_state(laser, electron, channel)
            residual = max(kinematic_residuals(laser, electron, kin).values())
            forward = abs(emitted_photon_energy(laser, electron, n, 0.0) / (n * laser.k) - 1)
            value = xs.dsigma_spin_averaged(xs.XSecContext(laser, electron, channel), 1).value
            rows.append((t, n, spec["a0"], spec["k"], spec["E"], spec["theta"], kin.kprime,
                         kp_ref, _relative(kin.kprime, kp_ref), value, xs_ref,
                         _relative(value, xs_ref), residual, forward, laser_flux_si(laser)))
    return rows


TABLE_COLUMNS = ("table", "harmonic", "a0", "k", "E", "theta", "kprime", "kprime_ref",
                 "kprime_rel_dev", "xsec", "xsec_ref", "xsec_rel_dev", "residual_max",
                 "forward_dev", "flux_w_m2")


def cmd_table(args, stdout):
    which = (1, 2) if args.which == "all" else (int(args.which),)
    notes = ["xsec: spin-averaged, polarization 1, per sr per lambda_c^3 of laser, "
             "in lambda_c^2",
             "*_rel_dev = computed/reference - 1; residual_max = worst kinematic residual; "
             "forward_dev = |k'(theta=0)/(N k) - 1|"]
    _emit(args, [Table("nlc-table v1", TABLE_COLUMNS, table_rows(which), notes)], stdout)


def cmd_flux(args, stdout):
    if args.table is not None:
        spec = REFERENCE_TABLES[args.table]
        a0, k = spec["a0"], spec["k"]
    else:
        _require(args, "a0", "k")
        a0, k = args.a0, args.k
    flux = laser_flux_si(LaserParams(a0, k))
    _emit(args, [Table("nlc-flux v1", ("a0", "k", "flux_w_m2"), [(a0, k, flux)])], stdout)


# --- gain -----------------------------------------------------------------------------------

def _read_xsec_csv(path, row):
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    columns = None
    data = []
    for line in lines:
        if line.startswith("# nlc-xsec v1 columns:"):
            columns = line.split(":", 1)[1].strip().split(",")
        elif line and not line.startswith("#"):
            data.append(next(csv.reader([line])))
    if columns is None:
        raise ValidationError(f"{path} is not an nlc-xsec v1 file")
    if not 0 <= row < len(data):
        raise ValidationError(f"{path} has {len(data)} data rows; row {row} requested")
    rec = dict(zip(columns, data[row]))
    return float(rec["value"]), int(rec["n_occ"])


def cmd_gain(args, stdout):
    if args.from_xsec:
        value, n_occ = _read_xsec_csv(args.from_xsec, args.row)
        a = gain_parameter(args.n_electrons, value, n_occ)
    else:
        _require(args, "a")
        a = args.a
    if args.samples < 2:
        raise ValidationError("--samples must be >= 2")
    if args.method == "closed":
        ls = np.linspace(0.0, args.length, args.samples)
        counts = [(float(l), photon_number_closed(a, float(l), args.lambda_c)) for l in ls]
    else:
        traj = photon_number_trajectory(a, args.length, args.lambda_c, args.steps)
        picks = sorted({round(i * args.steps / (args.samples - 1)) for i in range(args.samples)})
        counts = [traj[i] for i in picks]
    rows = [(l, c.n, c.log10_n_plus_1, c.log_space) for l, c in counts]
    notes = [f"a = {a!r}, lambda_c = {args.lambda_c!r} m, method = {args.method}",
             "n is blank where only log10(n + 1) is representable"]
    _emit(args, [Table("nlc-gain v1", ("l_m", "n", "log10_n_plus_1", "log_space"), rows, notes)],
          stdout)


# --- modes, bessel, kinematics ------------------------------------------------------------------

def cmd_modes_check(args, stdout):
    laser = LaserParams(args.a0, args.k)
    q = ModeQuantumNumbers(args.n, args.sigma, args.pz, args.pperp)
    grid = GridSpec(rho_max=args.rho_max, h=args.h, z_max=2 * math.pi / args.k, n_max=args.nmax)
    rows = residual_convergence(q, laser, grid, levels=args.levels)
    p = (args.pperp, 0.0, args.pz)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.points):
        x = rng.uniform(-args.rho_max, args.rho_max, 3)
        t = float(rng.uniform(-math.pi, math.pi))
        ref = wolkow_psi_r(x, t, p, args.sigma, laser)
        got = mode_sum_reconstruction(x, t, p, args.sigma, laser, args.nmax)
        worst = max(worst, float(np.max(np.abs(got - ref))))
    notes = [f"relative eigen-equation residual under halving of h; n = {args.n}, "
             f"sigma = {args.sigma}",
             f"mode-sum max deviation from the closed-form wave over {args.points} points: "
             f"{worst:.3e}",
             f"Dirac algebra self-test max deviation: {dirac_self_test():.3e}"]
    _emit(args, [Table("nlc-modes v1", ("h", "residual", "ratio"), rows, notes)], stdout)


def cmd_bessel(args, stdout):
    _require(args, "order", "arg")
    r = bessel_j_eval(args.order, args.arg, args.method)
    sign, log_abs = r.log_scaled
    row = (r.order, r.argument, r.method, r.value, sign, log_abs, r.underflow)
    _emit(args, [Table("nlc-bessel v1",
                       ("order", "argument", "method", "value", "sign", "log_abs", "underflow"),
                       [row])], stdout)


KIN_COLUMNS = ("a0", "k", "E", "p_z", "harmonic", "theta", "kprime", "Eprime", "pprime_z",
               "pprime_perp", "R", "Rprime", "pondero", "S", "bessel_argument")


def cmd_kinematics(args, stdout):
    _require(args, "a0", "k", "energy", "theta")
    laser = LaserParams(args.a0, args.k)
    electron = ElectronIn(args.energy, args.pz)
    kin = scattered_state(laser, electron, Channel(args.harmonic, args.theta))
    row = (laser.a0, laser.k, electron.E, electron.p_z, kin.harmonic, kin.theta, kin.kprime,
           kin.Eprime, kin.pprime_z, kin.pprime_perp, kin.R, kin.Rprime, kin.pondero, kin.S,
           kin.bessel_argument)
    _emit(args, [Table("nlc-kinematics v1", KIN_COLUMNS, [row])], stdout)


# --- parser --------------------------------------------------------------------------------------

def _float_list(p, name, default, help_text):
    p.add_argument(name, type=float, nargs="+", default=list(default), help=help_text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nlcompton",
        description="Nonlinear Compton scattering on a circularly polarized laser "
                    "(natural units, m = 1).")
    subs = parser.add_subparsers(dest="command", metavar="COMMAND")
    subs.required = True
    table = {}

    def add(name, func, help_text):
        p = subs.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        table[name] = p
        return p

    p = add("kinematics", cmd_kinematics, "scattered-state kinematics of one channel")
    _add_physics(p)
    _add_common(p)

    p = add("xsec", cmd_xsec, "differential cross section of one channel")
    _add_physics(p)
    _add_xsec_options(p)
    p.add_argument("--dump-amplitudes", action="store_true",
                   help="also emit the F/G coefficients for both incident spins")
    _add_common(p)

    p = add("sweep", cmd_sweep, "cross sections over a one-parameter grid")
    _add_physics(p)
    _add_xsec_options(p)
    p.add_argument("--axis", choices=sorted(SWEEP_AXES), help="parameter to vary")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--count", type=int, default=11)
    p.add_argument("--scale", choices=("lin", "log"), default="lin")
    p.add_argument("--workers", type=int, default=1, help="worker processes (output order is fixed)")
    _add_common(p)

    p = add("kn-compare", cmd_kn_compare, "harmonic-1 cross section against Klein-Nishina")
    p.add_argument("--energy", type=float, default=FIGURE_ENERGY)
    p.add_argument("--k", type=float, default=FIGURE_K)
    _float_list(p, "--theta", FIGURE_THETAS, "emission angles in radians")
    _float_list(p, "--a0", (1e-6,), "laser amplitudes")
    p.add_argument("--pol-index", type=int, nargs="+", choices=(1, 2), default=[1, 2])
    _add_common(p)

    p = add("figure-data", cmd_figure_data, "Y(X) curves against the Klein-Nishina baseline")
    p.add_argument("--figure", type=int, choices=(1, 2), default=1,
                   help="polarization index i of the curve")
    p.add_argument("--grid", type=_grid, default=(-6.0, 0.0, 61), help="X grid start:stop:count")
    _float_list(p, "--theta", FIGURE_THETAS, "emission angles in radians")
    p.add_argument("--energy", type=float, default=FIGURE_ENERGY)
    p.add_argument("--k", type=float, default=FIGURE_K)
    p.add_argument("--baseline", choices=("lab", "covariant"), default="lab")
    _add_common(p)

    p = add("table", cmd_table, "recompute the reference tables and report deviations")
    p.add_argument("--which", choices=("1", "2", "all"), default="all")
    _add_common(p)

    p = add("flux", cmd_flux, "laser intensity in W/m^2")
    p.add_argument("--a0", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--table", type=int, choices=(1, 2), help="use a reference table's laser")
    _add_common(p)

    p = add("gain", cmd_gain, "photon growth along the interaction tube")
    p.add_argument("--a", type=float, help="gain parameter")
    p.add_argument("--from-xsec", help="derive the gain from an nlc-xsec CSV file")
    p.add_argument("--row", type=int, default=0, help="data row of --from-xsec to use")
    p.add_argument("--n-electrons", type=float, default=1.0)
    p.add_argument("--length", type=float, default=1.0, help="tube length in metres")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--samples", type=int, default=11, help="output rows along the tube")
    p.add_argument("--lambda-c", type=float, default=COMPTON_WAVELENGTH_M)
    p.add_argument("--method", choices=("ode", "closed"), default="ode")
    _add_common(p)

    p = add("modes-check", cmd_modes_check, "eigenmode residual convergence and mode-sum check")
    p.add_argument("--a0", type=float, default=0.5)
    p.add_argument("--k", type=float, default=0.7)
    p.add_argument("--pz", type=float, default=0.3)
    p.add_argument("--pperp", type=float, default=1.0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--sigma", type=_spin, default=1)
    p.add_argument("--h", type=float, default=0.04)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--rho-max", type=float, default=2.0)
    p.add_argument("--nmax", type=int, default=40)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)

    p = add("bessel", cmd_bessel, "evaluate J_n(x) with diagnostics")
    p.add_argument("--order", type=int)
    p.add_argument("--arg", type=float)
    p.add_argument("--method", choices=METHODS, default="auto")
    _add_common(p)

    return parser, table


def _attach_grid(argv):
    # argparse reads "-6:0:61" as an option; glue it to its flag
    out = []
    for token in argv:
        if out and out[-1] == "--grid" and token.startswith("-"):
            out[-1] = f"--grid={token}"
        else:
            out.append(token)
    return out


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI and return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser, subs = build_parser()
    argv = _attach_grid(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        if args.config:
            _apply_config(subs[args.command], args.config)
            args = parser.parse_args(argv)
        args.func(args, stdout)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except ValidationError as exc:
        stderr.write(f"nlcompton: error: {exc}\n")
        return 2
    except (DomainError, NLComptonError, ArithmeticError) as exc:
        stderr.write(f"nlcompton: numerical domain error: {exc}\n")
        return 3
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
