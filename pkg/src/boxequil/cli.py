"""Command-line front end: figure data as CSV, sweeps and scale reports.

Subcommands ``evolve``, ``density``, ``sweep`` and ``report`` share one set of
flags. A ``--config`` file holds ``key = value`` lines using the flag names
(without leading dashes); explicit flags override it. Lengths are in units
of ``L`` and times in units of ``T_g``.
"""

import argparse
import io
import os
import sys
import tempfile

import numpy as np

from .closed_form import (SeriesApprox, d_double_sum, d_leading, d_series, energy_std,
                          power_law_fit, tau_box, tau_gaussian, tau_over_Tg, tau_typical,
                          uniform_g)
from .dynamics import (Dephasing, density, equilibrium, time_average_distinguishability)
from .quadrature import ConvergenceError
from .spectrum import (BoxConfig, deff_gaussian_closed_form, effective_dimension,
                       gaussian_state, sigma_for_deff, uniform_state)
from .window import Window, build_matrix

EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3


class ConfigError(ValueError):
    pass


def _float_list(text):
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def _int_list(text):
    values = _float_list(text)
    if any(v != int(v) for v in values):
        raise ValueError(f"expected integers, got {text!r}")
    return [int(v) for v in values]


def _bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


# name -> (parser, default, help)
OPTIONS = {
    "sigma_over_l": (float, None, "Gaussian packet width sigma/L"),
    "deff": (float, None, "Gaussian packet with this closed-form effective dimension"),
    "uniform_n": (int, None, "uniform superposition of the lowest N levels"),
    "window_center": (float, None, "window center in units of L (default 0, or -1/4 for uniform)"),
    "window_width": (float, 0.5, "window width in units of L"),
    "tmin": (float, 0.0, "first sample time, units of T_g"),
    "tmax": (float, None, "last sample time, units of T_g (default 5 tau_G or T_g/(2N))"),
    "samples": (int, None, "number of samples (time or average grid)"),
    "trunc_eps": (float, 1e-12, "discarded probability when truncating Gaussian states"),
    "mode": (str, "analytic", "Gaussian amplitudes: analytic or quadrature"),
    "terms_p": (int, 16, "terms of the R_p series"),
    "terms_kl": (int, None, "cutoff of the (k, l) double sum (default 4 N_max)"),
    "time": (float, 0.0, "density: time in units of T_g"),
    "equilibrium": (_bool, False, "density: use the equilibrium state"),
    "points": (int, 1001, "density: number of positions"),
    "sweep_deff": (_float_list, None, "sweep: Gaussian effective dimensions"),
    "sweep_sigma_over_l": (_float_list, None, "sweep: Gaussian widths sigma/L"),
    "sweep_uniform_n": (_int_list, None, "sweep: uniform level counts"),
    "sweep_width": (_float_list, None, "sweep: window widths w/L"),
    "fit_min": (float, 25.0, "sweep: smallest d_eff used in the fit"),
    "fit_max": (float, 400.0, "sweep: largest d_eff used in the fit"),
    "L": (float, 1.0, "box width"),
    "m": (float, 1.0, "particle mass"),
    "hbar": (float, 1.0, "reduced Planck constant"),
    "out": (str, None, "output file (default stdout)"),
}


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in OPTIONS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="boxequil",
        description="Equilibration of a particle in a box under window measurements.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags override it")
    for name, (_, default, help_text) in OPTIONS.items():
        flag = "--" + name.replace("_", "-").lower()
        if name in ("L", "m", "hbar"):
            flag = "--" + name
        if OPTIONS[name][0] is _bool:
            common.add_argument(flag, dest=name, action="store_const", const="true",
                                default=None, help=help_text)
        else:
            common.add_argument(flag, dest=name, default=None,
                                help=f"{help_text} (default: {default})")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evolve", parents=[common], help="distinguishability time series")
    sub.add_parser("density", parents=[common], help="position probability density")
    sub.add_parser("sweep", parents=[common], help="time-averaged distinguishability sweeps")
    sub.add_parser("report", parents=[common], help="effective dimension and time scales")
    return parser


def resolve(args):
    """Merge defaults, config file and flags into a validated option dict."""
    raw = {}
    if args.config:
        try:
            raw.update(read_config(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    for name in OPTIONS:
        value = getattr(args, name)
        if value is not None:
            raw[name] = value
    cfg = {}
    for name, (parse, default, _) in OPTIONS.items():
        if name in raw:
            try:
                cfg[name] = parse(raw[name])
            except ValueError as exc:
                raise ConfigError(f"invalid value for {name}: {raw[name]!r} ({exc})") from exc
        else:
            cfg[name] = default
    cfg["command"] = args.command
    _validate(cfg)
    return cfg


def _validate(cfg):
    try:
        cfg["box"] = BoxConfig(cfg["L"], cfg["m"], cfg["hbar"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    command = cfg["command"]
    sweeps = [k for k in ("sweep_deff", "sweep_sigma_over_l", "sweep_uniform_n", "sweep_width")
              if cfg[k] is not None]
    if cfg["sigma_over_l"] is None and cfg["deff"] is not None:
        if cfg["deff"] < 1:
            raise ConfigError("deff must be at least 1")
        cfg["sigma_over_l"] = sigma_for_deff(cfg["deff"])
    gaussian = cfg["sigma_over_l"] is not None
    uniform = cfg["uniform_n"] is not None
    if command == "sweep":
        if len(sweeps) != 1:
            raise ConfigError("sweep needs exactly one of --sweep-deff, --sweep-sigma-over-l, "
                              "--sweep-uniform-n, --sweep-width")
        if not cfg[sweeps[0]]:
            raise ConfigError("sweep list is empty")
        cfg["sweep"] = sweeps[0]
        if sweeps[0] == "sweep_width" and gaussian == uniform:
            raise ConfigError("a width sweep needs exactly one of --sigma-over-l/--deff "
                              "and --uniform-n")
    elif gaussian == uniform:
        raise ConfigError("give exactly one of --sigma-over-l/--deff and --uniform-n")
    if gaussian:
        _check_sigma(cfg["sigma_over_l"])
    if uniform and cfg["uniform_n"] < 1:
        raise ConfigError("uniform-n must be at least 1")
    for value in cfg["sweep_sigma_over_l"] or ():
        _check_sigma(value)
    if any(v < 1 for v in cfg["sweep_deff"] or ()):
        raise ConfigError("sweep deff values must be at least 1")
    if any(v < 1 for v in cfg["sweep_uniform_n"] or ()):
        raise ConfigError("sweep uniform-n values must be at least 1")
    if not 0 < cfg["trunc_eps"] < 1:
        raise ConfigError("trunc-eps must lie in (0, 1)")
    if cfg["mode"] not in ("analytic", "quadrature"):
        raise ConfigError("mode must be 'analytic' or 'quadrature'")
    if cfg["window_center"] is None:
        cfg["window_center"] = -0.25 if (uniform and not gaussian) or (
            cfg.get("sweep") == "sweep_uniform_n") else 0.0
    widths = cfg["sweep_width"] if cfg.get("sweep") == "sweep_width" else [cfg["window_width"]]
    for w in widths:
        _window(cfg, w)
    if cfg["samples"] is not None and cfg["samples"] < 2:
        raise ConfigError("samples must be at least 2")
    if cfg["tmin"] < 0:
        raise ConfigError("tmin must be non-negative")
    if cfg["tmax"] is not None and cfg["tmax"] < cfg["tmin"]:
        raise ConfigError("tmax must not be smaller than tmin")
    if cfg["points"] < 2:
        raise ConfigError("points must be at least 2")
    if cfg["terms_p"] < 1 or (cfg["terms_kl"] is not None and cfg["terms_kl"] < 1):
        raise ConfigError("term counts must be positive")
    if cfg["fit_min"] > cfg["fit_max"]:
        raise ConfigError("fit-min must not exceed fit-max")


def _check_sigma(value):
    if not 0 < value < 0.25:
        raise ConfigError(f"sigma/L must lie in (0, 1/4), got {value}")


def _window(cfg, width):
    box = cfg["box"]
    win = Window(cfg["window_center"] * box.L, width * box.L)
    try:
        return win.validate(box)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _state(cfg, sigma_over_l=None, uniform_n=None):
    box = cfg["box"]
    if sigma_over_l is None and uniform_n is None:
        sigma_over_l, uniform_n = cfg["sigma_over_l"], cfg["uniform_n"]
    if sigma_over_l is not None:
        return gaussian_state(sigma_over_l * box.L, cfg["mode"], cfg["trunc_eps"], box)
    return uniform_state(uniform_n, box)


def fmt(value):
    return f"{float(value):.17g}"


def _csv(header, columns, footer=()):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join(fmt(v) for v in row) + "\n")
    for line in footer:
        buf.write(line + "\n")
    return buf.getvalue()


def cmd_evolve(cfg):
    box = cfg["box"]
    state = _state(cfg)
    win = _window(cfg, cfg["window_width"])
    dep = Dephasing(state, build_matrix(win, state.n_max, box))
    gaussian = state.kind == "gaussian"
    sigma = cfg["sigma_over_l"] * box.L if gaussian else None
    tmax = cfg["tmax"]
    if tmax is None:
        tmax = (5.0 * tau_gaussian(sigma, box) / box.Tg if gaussian
                else 1.0 / (2.0 * state.n_max))
    n = cfg["samples"] or 201
    t_rel = np.linspace(cfg["tmin"], tmax, n)
    t = t_rel * box.Tg
    columns = [t_rel, np.abs(dep.signed(t))]
    header = ["t_over_Tg", "D_numeric"]
    if gaussian:
        terms_kl = cfg["terms_kl"] or 4 * state.n_max
        approx = SeriesApprox.from_sigma(sigma, box, cfg["terms_p"], terms_kl)
        columns += [d_leading(t, approx), d_series(t, approx), d_double_sum(t, approx)]
        header += ["D_leading", "D_series", "D_double_sum"]
    elif state.n_max >= 2:
        columns.append(uniform_g(t, state.n_max, box))
        header.append("g_t")
    return _csv(header, columns)


def cmd_density(cfg):
    box = cfg["box"]
    state = _state(cfg)
    x_rel = np.linspace(-0.5, 0.5, cfg["points"])
    x = np.clip(x_rel * box.L, -box.L / 2, box.L / 2)
    if cfg["equilibrium"]:
        values = density(equilibrium(state), x)
    else:
        values = density(state, x, cfg["time"] * box.Tg)
    # the walls are nodes of every eigenfunction
    values[0] = values[-1] = 0.0
    return _csv(["x_over_L", "density"], [x_rel, values])


def _average(cfg, state, width):
    matrix = build_matrix(_window(cfg, width), state.n_max, cfg["box"])
    return time_average_distinguishability(state, matrix, cfg["samples"])


def cmd_sweep(cfg):
    kind = cfg["sweep"]
    values = cfg[kind]
    if kind == "sweep_width":
        averages = [_average(cfg, _state(cfg), w) for w in values]
        return _csv(["w_over_L", "avg_D"], [values, averages])
    deffs, averages = [], []
    for v in values:
        if kind == "sweep_deff":
            state = _state(cfg, sigma_over_l=sigma_for_deff(v))
        elif kind == "sweep_sigma_over_l":
            state = _state(cfg, sigma_over_l=v)
        else:
            state = _state(cfg, uniform_n=v)
        deffs.append(effective_dimension(state))
        averages.append(_average(cfg, state, cfg["window_width"]))
    lo, hi = cfg["fit_min"], cfg["fit_max"]
    # tolerate the 1e-12 level truncation error in the summed effective dimension
    mask = [(lo * (1 - 1e-9) <= d <= hi * (1 + 1e-9)) for d in deffs]
    points = [(d, a) for d, a, keep in zip(deffs, averages, mask) if keep]
    if len(points) >= 3:
        prefactor, exponent = power_law_fit(points)
        footer = [f"#fit,prefactor={fmt(prefactor)},exponent={fmt(exponent)},"
                  f"deff_min={fmt(lo)},deff_max={fmt(hi)},points={len(points)}"]
    else:
        footer = [f"#fit,skipped,deff_min={fmt(lo)},deff_max={fmt(hi)},points={len(points)}"]
    return _csv(["deff", "avg_D"], [deffs, averages], footer)


def cmd_report(cfg):
    box = cfg["box"]
    state = _state(cfg)
    deff = effective_dimension(state)
    lines = [
        f"state: {state.kind} {state.params}",
        f"units: L={fmt(box.L)} m={fmt(box.m)} hbar={fmt(box.hbar)}; times in T_g = "
        f"{fmt(box.Tg)}",
        f"N_max = {state.n_max}",
        f"d_eff (sum) = {fmt(deff)}",
        f"tau_typical/T_g = {fmt(tau_typical(deff))}  [1/(16 d_eff^2), summed d_eff]",
    ]
    if state.kind == "gaussian":
        sigma = cfg["sigma_over_l"] * box.L
        tau = tau_gaussian(sigma, box)
        lines[4:4] = [f"d_eff (closed form) = {fmt(deff_gaussian_closed_form(sigma, box))}"]
        lines += [
            f"tau_G = {fmt(tau)}  [time, m L sigma/(hbar pi)]",
            f"tau_G/T_g = {fmt(tau / box.Tg)}",
            f"tau_G/T_g (from d_eff) = {fmt(tau_over_Tg(deff))}  [1/(16 sqrt(pi) d_eff)]",
            f"tau_box = {fmt(tau_box(sigma, box))}  [time, pi tau_G]",
            f"tau_box/T_g = {fmt(tau_box(sigma, box) / box.Tg)}",
            f"v_E = {fmt(energy_std(sigma, box))}  [energy, hbar^2/(4 sqrt(2) m sigma^2)]",
        ]
    else:
        lines.append(f"tau_U/T_g = {fmt(1.0 / (4.0 * state.n_max))}  [1/(4N)]")
    return "\n".join(lines) + "\n"


COMMANDS = {"evolve": cmd_evolve, "density": cmd_density, "sweep": cmd_sweep,
            "report": cmd_report}


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".boxequil-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        text = COMMANDS[cfg["command"]](cfg)
        _write(text, cfg["out"])
    except ConvergenceError as exc:
        print(f"boxequil: numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ConfigError, ValueError) as exc:
        print(f"boxequil: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
