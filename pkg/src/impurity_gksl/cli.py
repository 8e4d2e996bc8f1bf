"""Command-line front end: ``simulate``, ``sweep``, ``diagram`` and ``validate``.

Settings come from an optional INI-style config file (a ``[params]`` section
shared by all commands plus one section per command) and from command-line
flags; flags win. Exit codes: 0 success, 1 validation failure, 2
configuration error, 3 physics-invariant violation during evolution.
"""

import argparse
import configparser
import dataclasses
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .analytic import crossover_class, lambda_global, lambda_local
from .dissipators import global_jump_operators, local_jump_operators
from .evolution import PhysicsViolation, build_liouvillian, evolve
from .io import TRAJECTORY_COLUMNS, config_hash, trajectory_rows, write_json, write_table
from .model import ParameterError, SystemParams, build_hamiltonian, initial_state
from .regimes import DEFAULT_ETA, DiagramSpec, RegimeLabel, classify, regime_diagram

log = logging.getLogger("impurity_gksl")

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_PHYSICS = 0, 1, 2, 3
OUT_ENV = "IMPURITY_GKSL_OUT"
PARAM_KEYS = ("epsilon", "delta", "v", "epsilon_I", "beta", "gamma_minus", "delta_p0")
SUMMARY_COLUMNS = ("g", "approach", "crossover_class", "observed_revival", "first_min_time", "initial_decay_rate", "max_gap")


class ConfigError(ValueError):
    pass


def _float_tuple(text, n=None):
    if isinstance(text, (tuple, list)):
        parts = list(text)
    else:
        parts = [s for s in str(text).replace(";", ",").split(",") if s.strip()]
    try:
        vals = tuple(float(x) for x in parts)
    except ValueError as exc:
        raise ConfigError(f"cannot parse number list {text!r}") from exc
    if n is not None and len(vals) != n:
        raise ConfigError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _bool(text):
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in {"1", "true", "yes", "on"}:
        return True
    if t in {"0", "false", "no", "off"}:
        return False
    raise ConfigError(f"cannot parse boolean {text!r}")


def _range(text):
    lo, hi, steps = _float_tuple(text, 3)
    if steps != int(steps):
        raise ConfigError(f"steps must be an integer, got {steps}")
    return (lo, hi, int(steps))


def _complex(text):
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc


_DEFAULT_PARAMS = SystemParams()


@dataclass
class RunConfig:
    """Resolved settings for one command."""

    command: str
    epsilon: float = _DEFAULT_PARAMS.epsilon
    delta: float = _DEFAULT_PARAMS.delta
    v: float = _DEFAULT_PARAMS.v
    epsilon_I: float = _DEFAULT_PARAMS.epsilon_I
    beta: float = _DEFAULT_PARAMS.beta
    gamma_minus: float = _DEFAULT_PARAMS.gamma_minus
    delta_p0: float = _DEFAULT_PARAMS.delta_p0
    g: Optional[float] = None
    qubit_pop0: float = 0.5
    qubit_coherence0: complex = 0.5
    approach: Optional[str] = None
    method: str = "expm"
    t_max: Optional[float] = None
    n_times: int = 200
    g_list: tuple = (0.5, 2.0, 6.0)
    v_range: Optional[tuple] = None
    gamma_range: Optional[tuple] = None
    eta: float = DEFAULT_ETA
    out: str = "results"
    format: str = "csv"
    plot_script: bool = False
    figures: bool = True
    tolerance: Optional[float] = None
    tol: dict = field(default_factory=dict)

    _CONVERT = {
        "epsilon": float, "delta": float, "v": float, "epsilon_I": float, "beta": float,
        "gamma_minus": float, "delta_p0": float, "g": float, "qubit_pop0": float,
        "qubit_coherence0": _complex, "approach": str, "method": str, "t_max": float,
        "n_times": int, "g_list": _float_tuple, "v_range": _range, "gamma_range": _range,
        "eta": float, "out": str, "format": str, "plot_script": _bool, "figures": _bool,
        "tolerance": float,
    }

    @classmethod
    def resolve(cls, command, file_values, flag_values):
        values = {}
        tol = {}
        for source in (file_values, flag_values):
            for key, raw in source.items():
                if key.startswith("tol_"):
                    tol[key[4:].upper()] = float(raw)
                    continue
                if key == "tol":
                    tol.update(raw)
                    continue
                if key not in cls._CONVERT:
                    raise ConfigError(f"unknown setting {key!r}")
                try:
                    values[key] = None if raw is None else cls._CONVERT[key](raw)
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from exc
        if "out" not in values and os.environ.get(OUT_ENV):
            values["out"] = os.environ[OUT_ENV]
        cfg = cls(command=command, tol=tol, **values)
        cfg._check()
        return cfg

    def _check(self):
        if self.approach is None:
            self.approach = "both" if self.command == "sweep" else "local"
        if self.approach not in ("local", "global", "both"):
            raise ConfigError(f"approach must be local, global or both, got {self.approach!r}")
        if self.method not in ("expm", "rk"):
            raise ConfigError(f"method must be expm or rk, got {self.method!r}")
        if self.format not in ("csv", "json", "both"):
            raise ConfigError(f"format must be csv, json or both, got {self.format!r}")
        if self.n_times < 1:
            raise ConfigError("time grid needs at least one point (n_times >= 1)")
        if self.t_max is not None and not (np.isfinite(self.t_max) and self.t_max > 0):
            raise ConfigError(f"t_max must be positive, got {self.t_max}")
        if any(not g > 0 for g in self.g_list):
            raise ConfigError("g_list entries must be > 0")
        if self.g is not None and not self.g >= 0:
            raise ConfigError(f"g must be >= 0, got {self.g}")

    def base_params(self):
        return SystemParams(**{k: getattr(self, k) for k in PARAM_KEYS})

    def params(self):
        p = self.base_params()
        if self.g is not None:
            p = p.replace(v=0.5 * self.g * p.gamma)
        return p

    def times(self, p):
        t_max = self.t_max if self.t_max is not None else 10.0 / p.gamma
        if self.n_times == 1:
            return np.array([0.0])
        return np.linspace(0.0, t_max, self.n_times)

    def approaches(self):
        return ("local", "global") if self.approach == "both" else (self.approach,)

    def formats(self):
        return ("csv", "json") if self.format == "both" else (self.format,)

    def as_dict(self):
        d = dataclasses.asdict(self)
        d["qubit_coherence0"] = [self.qubit_coherence0.real, self.qubit_coherence0.imag]
        return d

    def hash(self):
        d = self.as_dict()
        d.pop("out")
        return config_hash(d)


def read_config_file(path, command):
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep epsilon_I
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values = {}
    for section in ("params", command):
        if parser.has_section(section):
            values.update(parser.items(section))
    return values


# ---------------------------------------------------------------- outputs


def _metadata(cfg, p, **extra):
    gm, gp = p.gamma_minus, p.gamma_plus
    meta = {
        "tool": "impurity-gksl",
        "version": __version__,
        "command": cfg.command,
        "config": cfg.as_dict(),
        "config_hash": cfg.hash(),
        "params": p.as_dict(),
        "derived": {
            "gamma_minus": gm,
            "gamma_plus": gp,
            "gamma": p.gamma,
            "g": p.g,
            "delta_p_bar": p.delta_p_bar,
            "omega": p.omega,
            "omega_0": p.omega_tau(0),
            "omega_1": p.omega_tau(1),
        },
        "regime": classify(abs(p.v), p.gamma, p, cfg.eta).value,
        "crossover_class": crossover_class(abs(p.g)).value,
    }
    meta.update(extra)
    return meta


def _jumps(p, approach):
    if approach == "local":
        return local_jump_operators(p)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        ops = global_jump_operators(p)
    for w in caught:
        log.warning("%s", w.message)
    return ops


def _run_trajectory(cfg, p, approach, times):
    H = build_hamiltonian(p)
    gen = build_liouvillian(H, _jumps(p, approach))
    rho0 = initial_state(p, cfg.qubit_coherence0, cfg.qubit_pop0)
    traj = evolve(rho0, gen, times, method=cfg.method)
    analytic = None
    if p.delta == 0:
        lam = lambda_local if approach == "local" else lambda_global
        analytic = lam(times, p) * cfg.qubit_coherence0
    return traj, analytic


def _write_trajectory(cfg, out, stem, traj, analytic, p, **extra):
    written = []
    rows = trajectory_rows(traj, analytic)
    for fmt_ in cfg.formats():
        written.append(write_table(out / f"{stem}.{fmt_}", rows, TRAJECTORY_COLUMNS, fmt_).name)
    write_json(out / f"{stem}.meta.json", _metadata(cfg, p, files=written, **extra))
    return written


def _normalised(values):
    values = np.abs(values)
    return values / values[0] if values[0] else values


def _first_min_time(times, y):
    for k in range(1, len(y) - 1):
        if y[k] < y[k - 1] and y[k] <= y[k + 1] and np.max(y[k:]) - y[k] > 1e-6:
            return float(times[k])
    return None


def _initial_decay_rate(times, y, gamma):
    """-slope of a least-squares line through ln|Lambda| on 0 <= t <= 1/gamma."""
    mask = (times <= 1.0 / gamma) & (y > 0)
    if mask.sum() < 2:
        return None
    slope = np.polyfit(times[mask], np.log(y[mask]), 1)[0]
    return float(-slope)


def cmd_simulate(cfg):
    p = cfg.params()
    out = Path(cfg.out)
    times = cfg.times(p)
    curves = []
    written = []
    for approach in cfg.approaches():
        traj, analytic = _run_trajectory(cfg, p, approach, times)
        stem = f"trajectory_{approach}"
        written += _write_trajectory(cfg, out, stem, traj, analytic, p, approach=approach)
        y = _normalised(traj.coherence)
        curves.append((f"{approach} (numeric)", times, y, "-"))
        if analytic is not None:
            curves.append((f"{approach} (closed form)", times, _normalised(analytic), ":"))
            err = float(np.max(np.abs(np.abs(traj.coherence) - np.abs(analytic))))
            print(f"{approach}: g={p.g:.6g} max ||coh_num|-|coh_ana|| = {err:.3e}")
        else:
            print(f"{approach}: g={p.g:.6g} (no closed form for delta != 0)")
    _emit_plots(cfg, out, "simulate", curves, p.gamma, [f for f in written if f.endswith(".csv")])
    return EXIT_OK


def cmd_sweep(cfg):
    if not cfg.g_list:
        raise ConfigError("g_list is empty")
    base = cfg.base_params()
    out = Path(cfg.out)
    summary = []
    curves = []
    csvs = []
    for g in cfg.g_list:
        p = base.replace(v=0.5 * g * base.gamma)
        times = cfg.times(p)
        moduli = {}
        for approach in cfg.approaches():
            traj, analytic = _run_trajectory(cfg, p, approach, times)
            written = _write_trajectory(cfg, out, f"sweep_g{g:g}_{approach}", traj, analytic, p, approach=approach, g=g)
            csvs += [f for f in written if f.endswith(".csv")]
            y = _normalised(traj.coherence)
            moduli[approach] = y
            curves.append((f"g={g:g} {approach}", times, y, "-" if approach == "local" else ":"))
            first_min = _first_min_time(times, y)
            summary.append(
                {
                    "g": g,
                    "approach": approach,
                    "crossover_class": crossover_class(g).name,
                    "observed_revival": first_min is not None,
                    "first_min_time": first_min,
                    "initial_decay_rate": _initial_decay_rate(times, y, p.gamma),
                    "max_gap": None,
                }
            )
        if len(moduli) == 2:
            gap = float(np.max(np.abs(moduli["local"] - moduli["global"])))
            for row in summary[-2:]:
                row["max_gap"] = gap
    for fmt_ in cfg.formats():
        write_table(out / f"summary.{fmt_}", summary, SUMMARY_COLUMNS, fmt_)
    write_json(out / "summary.meta.json", _metadata(cfg, base, g_list=list(cfg.g_list)))
    for row in summary:
        gap = "" if row["max_gap"] is None else f" max_gap={row['max_gap']:.4g}"
        print(f"g={row['g']:g} {row['approach']}: {row['crossover_class']} revival={row['observed_revival']}{gap}")
    _emit_plots(cfg, out, "sweep", curves, base.gamma, csvs)
    return EXIT_OK


def default_diagram_spec(cfg):
    p = cfg.base_params()
    v_scale = cfg.eta * min(p.omega, p.epsilon_I)
    v_range = cfg.v_range or (5 * v_scale / 100, 5 * v_scale, 100)
    v_max = v_range[1]
    gamma_range = cfg.gamma_range or (4 * v_max / 100, 4 * v_max, 100)
    return DiagramSpec(tuple(v_range), tuple(gamma_range), p, cfg.eta)


def cmd_diagram(cfg):
    spec = default_diagram_spec(cfg)
    diagram = regime_diagram(spec)
    out = Path(cfg.out)
    rows = [{"v": v, "gamma": gm, "label": lab.value} for v, gm, lab in diagram.rows()]
    for fmt_ in cfg.formats():
        write_table(out / f"diagram.{fmt_}", rows, ("v", "gamma", "label"), fmt_)
    p = spec.fixed
    meta = _metadata(
        cfg,
        p,
        axes={
            "v": {"min": spec.v_range[0], "max": spec.v_range[1], "steps": spec.v_range[2]},
            "gamma": {"min": spec.gamma_range[0], "max": spec.gamma_range[1], "steps": spec.gamma_range[2]},
            "order": "row-major, v outermost",
        },
        eta=spec.eta,
        local_boundary_v=spec.eta * min(p.omega, p.epsilon_I),
        global_condition="|Omega_0 - Omega_1| > gamma",
        labels_present=sorted(lab.value for lab in diagram.present()),
    )
    write_json(out / "diagram.meta.json", meta)
    counts = {lab: sum(r["label"] == lab.value for r in rows) for lab in RegimeLabel}
    print(", ".join(f"{lab.name}={n}" for lab, n in counts.items()))
    if cfg.figures:
        from .plotting import plot_regime_diagram

        plot_regime_diagram(diagram, out / "diagram.png")
    if cfg.plot_script:
        from .plotting import plot_script

        (out / "plot_diagram.py").write_text(plot_script("diagram", csv_name="diagram.csv", png="diagram_from_script.png"))
    return EXIT_OK


def cmd_validate(cfg):
    from .validation import check_config_point, run_checks

    p = cfg.params()
    results = run_checks(overrides=cfg.tol, tolerance=cfg.tolerance)
    tol_cfg = cfg.tolerance if cfg.tolerance is not None else 1e-10
    results += check_config_point(p, tol=cfg.tol.get("CONFIG", tol_cfg))
    for r in results:
        print(r.line())
    failed = [r.id for r in results if not r.passed]
    report = {
        "tool": "impurity-gksl",
        "version": __version__,
        "config_hash": cfg.hash(),
        "passed": not failed,
        "failed": failed,
        "checks": [r.as_dict() for r in results],
    }
    write_json(Path(cfg.out) / "validation_report.json", report)
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def _emit_plots(cfg, out, name, curves, gamma, csv_files):
    if cfg.figures and curves:
        from .plotting import plot_coherence

        plot_coherence(curves, out / f"{name}.png", gamma=gamma)
    if cfg.plot_script:
        from .plotting import plot_script

        (out / f"plot_{name}.py").write_text(plot_script("coherence", files=csv_files, png=f"{name}_from_script.png"))


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "diagram": cmd_diagram,
    "validate": cmd_validate,
}


# ---------------------------------------------------------------- parser


def _tol_pair(text):
    key, _, value = text.partition("=")
    try:
        return key.strip().upper(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ID=VALUE, got {text!r}")


def _global_flags():
    ap = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    ap.add_argument("--config", help="INI config file ([params] plus one section per command)")
    ap.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or ./results)")
    ap.add_argument("--format", choices=("csv", "json", "both"), help="data file format")
    ap.add_argument("--plot-script", dest="plot_script", action="store_const", const=True, help="also write a standalone plotting script")
    ap.add_argument("--no-figures", dest="figures", action="store_const", const=False, help="skip PNG figure rendering")
    return ap


def _param_flags():
    ap = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    grp = ap.add_argument_group("physical parameters")
    grp.add_argument("--epsilon", type=float, help="qubit bias")
    grp.add_argument("--delta", type=float, help="qubit tunnelling")
    grp.add_argument("--v", type=float, help="qubit-impurity coupling")
    grp.add_argument("--epsilon-I", dest="epsilon_I", type=float, help="impurity splitting")
    grp.add_argument("--beta", type=float, help="inverse temperature (0 = infinite temperature)")
    grp.add_argument("--gamma-minus", dest="gamma_minus", type=float, help="impurity emission rate")
    grp.add_argument("--delta-p0", dest="delta_p0", type=float, help="initial impurity population imbalance")
    grp.add_argument("--qubit-pop0", dest="qubit_pop0", type=float, help="initial rho^Q_00")
    grp.add_argument("--qubit-coherence0", dest="qubit_coherence0", help="initial rho^Q_01 (e.g. 0.5 or 0.3+0.1j)")
    grp.add_argument("--eta", type=float, help="local-validity ratio threshold")
    return ap


def _time_flags():
    ap = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    ap.add_argument("--approach", choices=("local", "global", "both"))
    ap.add_argument("--method", choices=("expm", "rk"), help="propagation method")
    ap.add_argument("--t-max", dest="t_max", type=float, help="end of the time grid (default 10/gamma)")
    ap.add_argument("--n-times", dest="n_times", type=int, help="number of grid points")
    return ap


def build_parser():
    glob = _global_flags()
    params = _param_flags()
    timing = _time_flags()
    ap = argparse.ArgumentParser(
        prog="impurity-gksl",
        description="Local vs. global GKSL dynamics of a qubit coupled to a dissipative impurity.",
        parents=[glob],
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[glob, params, timing], help="evolve one parameter point")
    s.add_argument("--g", type=float, default=argparse.SUPPRESS, help="set v = g * gamma / 2")

    s = sub.add_parser("sweep", parents=[glob, params, timing], help="coherence for a list of g values")
    s.add_argument("--g-list", dest="g_list", default=argparse.SUPPRESS, help="comma-separated g values")

    s = sub.add_parser("diagram", parents=[glob, params], help="regime diagram in the (v, gamma) plane")
    s.add_argument("--v-range", dest="v_range", default=argparse.SUPPRESS, help="min,max,steps")
    s.add_argument("--gamma-range", dest="gamma_range", default=argparse.SUPPRESS, help="min,max,steps")

    s = sub.add_parser("validate", parents=[glob, params], help="run the acceptance checks")
    s.add_argument("--tolerance", type=float, default=argparse.SUPPRESS, help="replace every check tolerance")
    s.add_argument("--tol", type=_tol_pair, action="append", default=argparse.SUPPRESS, metavar="ID=VALUE", help="per-check tolerance override")
    return ap


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    if "tol" in args:
        args["tol"] = dict(args["tol"])
    try:
        file_values = read_config_file(config_path, command) if config_path else {}
        cfg = RunConfig.resolve(command, file_values, args)
        cfg.params()  # validate before any output is written
        Path(cfg.out).mkdir(parents=True, exist_ok=True)
        return COMMANDS[command](cfg)
    except (ConfigError, ParameterError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except PhysicsViolation as exc:
        log.error("physics invariant violated: %s", exc)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
