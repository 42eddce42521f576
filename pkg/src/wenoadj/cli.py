"""Command-line front end: ``wenoadj {solve,adjoint,convergence,optimize,verify}``.

Configuration is layered: compiled-in preset, then an optional ``key = value``
file (``--config``), then command-line flags.  All outputs are CSV with a
header row and 17 significant digits.
"""

import argparse
import csv
import logging
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from wenoadj import _backend, control, oracle, verify
from wenoadj.adjoint import adjoint_sweep, terminal_data
from wenoadj.errors import ConfigurationError, DescentStall, WenoAdjError
from wenoadj.mesh import Grid1D, sample
from wenoadj.timestepping import SCHEMES, Discretization, TimeGrid, integrate

log = logging.getLogger("wenoadj")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3

INITIAL_DATA = {
    "bump": oracle.smooth_bump,
    "example1": oracle.example1_initial,
    "optimum43": oracle.optimum_43,
    "zero": lambda x: np.zeros_like(x),
}
TARGETS = {
    "zero": lambda x: np.zeros_like(x),
    "ramp43": oracle.target_43,
    "example1": oracle.example1_initial,
}
# "final-state" as target means y_d := y^{n_T}(u0), i.e. zero terminal data


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str = "custom"
    scheme: str = "weno3-ssprk3"
    a: float = -1.0
    b: float = 1.0
    n_cells: int = 200
    cfl: float = 0.25
    t_final: float = 0.5
    eps: float = 1e-6
    gamma: float = 0.5
    initial: str = "zero"
    target: str = "zero"
    interval_lo: float = None
    interval_hi: float = None
    tol: float = 1e-12
    max_iters: int = 50
    shrink: float = 0.95
    initial_step: float = 1.0
    max_backtracks: int = 500
    cold_start: bool = False
    levels: int = 4
    out_dir: str = "."
    seed: int = 0

    def validate(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"scheme: {self.scheme!r} not in {', '.join(SCHEMES)}")
        if self.n_cells < 1:
            raise ConfigurationError("n_cells: must be a positive integer")
        if not self.b > self.a:
            raise ConfigurationError("a, b: need a < b")
        for name in ("cfl", "eps", "t_final", "tol", "initial_step"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name}: must be positive, got {getattr(self, name)}")
        if not 0 < self.gamma <= 1:
            raise ConfigurationError(f"gamma: must lie in (0, 1], got {self.gamma}")
        if not 0 < self.shrink < 1:
            raise ConfigurationError(f"shrink: must lie in (0, 1), got {self.shrink}")
        if self.max_iters < 0 or self.max_backtracks < 1 or self.levels < 0:
            raise ConfigurationError("max_iters/max_backtracks/levels: out of range")
        if self.initial not in INITIAL_DATA and self.initial != "guess":
            raise ConfigurationError(
                f"initial: {self.initial!r} not in {', '.join(list(INITIAL_DATA) + ['guess'])}")
        if self.target not in TARGETS and self.target != "final-state":
            raise ConfigurationError(
                f"target: {self.target!r} not in {', '.join(list(TARGETS) + ['final-state'])}")
        return self

    @property
    def interval(self):
        lo = self.a if self.interval_lo is None else self.interval_lo
        hi = self.b if self.interval_hi is None else self.interval_hi
        return lo, hi

    def grid(self, n_cells=None):
        return Grid1D(self.a, self.b, n_cells or self.n_cells)

    def disc(self, n_cells=None):
        grid = self.grid(n_cells)
        time = TimeGrid.from_ratio(self.t_final, grid.dx, self.cfl)
        return Discretization(grid, time, self.scheme, eps=self.eps, gamma=self.gamma)


PRESETS = {
    "smooth-order": dict(scheme="weno3-erk4", a=-1.5, b=1.5, n_cells=150, cfl=0.5,
                         t_final=0.5, initial="bump", target="zero"),
    "example1": dict(scheme="weno3-ssprk3", a=-1.0, b=1.0, n_cells=200, cfl=0.25,
                     t_final=0.5, initial="example1", target="zero"),
    "control-target": dict(scheme="weno3-ssprk3", a=-1.0, b=1.0, n_cells=400, cfl=0.25,
                           t_final=0.5, initial="guess", target="ramp43", tol=1e-12,
                           max_iters=50),
    "zero-terminal": dict(scheme="weno3-ssprk3", a=-1.5, b=1.5, n_cells=150, cfl=0.5,
                          t_final=0.5, initial="bump", target="final-state"),
}
PRESETS["shock-adjoint"] = PRESETS["example1"]

_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _coerce(key, raw):
    typ = _FIELD_TYPES[key]
    if isinstance(raw, str):
        raw = raw.strip()
    try:
        if typ is bool or typ == "bool":
            if isinstance(raw, bool):
                return raw
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if typ is int or typ == "int":
            value = float(raw)
            if value != int(value):
                raise ValueError(raw)
            return int(value)
        if typ is float or typ == "float":
            return float(raw)
        return str(raw)
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse {raw!r} as {typ.__name__}") from None


def read_config_file(path):
    """Flat ``key = value`` file; ``#`` starts a comment, dashes equal underscores."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "interval":
            lo, hi = value.split(",")
            out["interval_lo"], out["interval_hi"] = lo, hi
            continue
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_config(preset=None, file_values=None, overrides=None) -> ExperimentConfig:
    values = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(
                f"preset: unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}")
        values.update(PRESETS[preset])
        values["preset"] = preset
    for layer in (file_values or {}, overrides or {}):
        for key, raw in layer.items():
            if raw is None:
                continue
            if key == "preset":
                continue
            values[key] = _coerce(key, raw)
    return ExperimentConfig(**values).validate()


# CSV helpers

def _fmt(v):
    if v is None or (isinstance(v, float) and np.isnan(v)):
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path, header, columns):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = zip(*columns)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


# experiment plumbing

def _initial_data(cfg, grid):
    if cfg.initial == "guess":
        raise ConfigurationError("initial: 'guess' is only meaningful for optimize")
    return sample(INITIAL_DATA[cfg.initial], grid)


def _target(cfg, grid, traj=None):
    if cfg.target == "final-state":
        if traj is None:
            raise ConfigurationError("target: 'final-state' needs a forward solve")
        return traj.final.copy()
    return sample(TARGETS[cfg.target], grid)


def _mask(cfg, grid):
    lo, hi = cfg.interval
    x = grid.x
    return (x >= lo) & (x <= hi)


def forward_adjoint(cfg, n_cells=None):
    disc = cfg.disc(n_cells)
    grid = disc.grid
    u0 = _initial_data(cfg, grid)
    traj = integrate(u0, disc)
    target = _target(cfg, grid, traj)
    pT = terminal_data(traj.final, target, _mask(cfg, grid))
    return disc, u0, traj, adjoint_sweep(traj, pT).p0


def reference_final_state(cfg, grid):
    """Exact final state where one is available (else ``None``)."""
    if cfg.initial == "bump":
        return oracle.characteristics_solution(
            oracle.smooth_bump, cfg.t_final, grid.x,
            du0=oracle.smooth_bump_derivative, speed_bound=0.4)
    if cfg.initial == "example1":
        return oracle.example1_initial(grid.x)
    return None


def reference_adjoint(cfg, grid):
    """Exact ``p(0, .)`` for the presets that have one."""
    if cfg.initial == "bump" and cfg.target == "zero":
        return oracle.smooth_bump(grid.x)
    if cfg.initial == "example1" and cfg.target == "zero" and cfg.t_final == 0.5:
        return oracle.example1_reversible_solution(grid.x)
    if cfg.target == "final-state":
        return np.zeros(grid.n_cells)
    return None


def cmd_solve(cfg):
    disc = cfg.disc()
    grid = disc.grid
    traj = integrate(_initial_data(cfg, grid), disc, record=False, track_mass=True)
    out = Path(cfg.out_dir)
    write_csv(out / "state_final.csv", ["x", "y"], [grid.x, traj.final])
    write_csv(out / "mass.csv", ["t", "mass"], [disc.time.times, traj.mass])
    print(f"solve: {cfg.scheme} N={grid.n_cells} n_T={disc.time.n_steps} -> {out}")
    return EXIT_OK


def cmd_adjoint(cfg):
    disc, u0, traj, p0 = forward_adjoint(cfg)
    grid = disc.grid
    out = Path(cfg.out_dir)
    write_csv(out / "adjoint_p0.csv", ["x", "p0"], [grid.x, p0])
    ref = reference_adjoint(cfg, grid)
    if ref is not None:
        err = np.abs(ref - p0)
        write_csv(out / "adjoint_error.csv", ["x", "p0", "p_exact", "abs_error"],
                  [grid.x, p0, ref, err])
        msg = f"max error {err.max():.3e}"
        if cfg.initial == "example1":
            msg += f", shock-funnel error {oracle.funnel_error(grid.x, p0):.3e}"
        print(f"adjoint: {cfg.scheme} N={grid.n_cells}: {msg}")
    else:
        print(f"adjoint: {cfg.scheme} N={grid.n_cells} -> {out}")
    return EXIT_OK


def convergence_table(cfg):
    """Forward and adjoint L-inf errors on the ladder ``N * 2^i``, ``i = 0..levels``."""
    fwd, adj = [], []
    for i in range(cfg.levels + 1):
        n = cfg.n_cells * 2 ** i
        disc, u0, traj, p0 = forward_adjoint(cfg, n)
        yT = reference_final_state(cfg, disc.grid)
        pref = reference_adjoint(cfg, disc.grid)
        if yT is None or pref is None:
            raise ConfigurationError("initial/target: convergence needs data with a known solution")
        fwd.append((n, float(np.max(np.abs(yT - traj.final)))))
        adj.append((n, float(np.max(np.abs(pref - p0)))))
        log.info("N=%d forward %.3e adjoint %.3e", n, fwd[-1][1], adj[-1][1])
    return oracle.convergence_rates(fwd), oracle.convergence_rates(adj)


def cmd_convergence(cfg):
    f, a = convergence_table(cfg)
    write_csv(Path(cfg.out_dir) / "rates.csv",
              ["N", "forward_error", "forward_rate", "adjoint_error", "adjoint_rate"],
              [f.n, f.errors, f.rates, a.errors, a.rates])
    for n, ef, rf, ea, ra in zip(f.n, f.errors, f.rates, a.errors, a.rates):
        rate = "" if rf is None else f"{rf:6.2f}   {ra:6.2f}"
        print(f"{n:6d}  {ef:.2e}  {ea:.2e}  {rate}")
    return EXIT_OK


def build_problem(cfg):
    disc = cfg.disc()
    if cfg.target == "final-state":
        raise ConfigurationError("target: 'final-state' is not an optimisation target")
    return control.ControlProblem(
        disc, sample(TARGETS[cfg.target], disc.grid), cfg.interval, cfg.tol,
        cfg.max_iters, cfg.shrink, cfg.initial_step, cfg.max_backtracks)


def _write_descent(out, problem, report):
    it = list(range(len(report.J)))
    J = np.asarray(report.J)
    steps = [None] + list(report.steps)
    write_csv(out / "descent.csv", ["iter", "J", "log10_J", "alpha", "grad_norm", "ln_J"],
              [it, J, np.log10(J), steps, report.grad_norms, np.log(J)])
    x = problem.disc.grid.x
    write_csv(out / "control_final.csv", ["x", "u0"], [x, report.control])
    write_csv(out / "state_final.csv", ["x", "y", "y_d"], [x, report.state, problem.target])


def cmd_optimize(cfg):
    problem = build_problem(cfg)
    grid = problem.disc.grid
    if cfg.cold_start:
        u0 = np.zeros(grid.n_cells)
    elif cfg.initial == "guess":
        u0 = control.initial_guess(problem)
    else:
        u0 = _initial_data(cfg, grid)
    out = Path(cfg.out_dir)
    try:
        report = control.armijo_descent(problem, u0)
    except DescentStall as exc:
        _write_descent(out, problem, exc.report)
        print(f"optimize: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _write_descent(out, problem, report)
    print(f"optimize: {cfg.scheme} N={grid.n_cells} iterations={report.iterations} "
          f"ln J0={np.log(report.J[0]):.3f} ln J={np.log(report.J[-1]):.3f} "
          f"(log10 J0={np.log10(report.J[0]):.3f}, log10 J={np.log10(report.J[-1]):.3f})")
    return EXIT_OK


def cmd_verify(cfg, names=None):
    try:
        checks = verify.run(cfg.seed, names)
    except KeyError as exc:
        raise ConfigurationError(f"filter: {exc.args[0]}") from None
    ok = True
    for c in checks:
        ok &= c.passed
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<13s} {c.detail}")
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print(f"verify: failing properties: {', '.join(failed)}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "solve": cmd_solve,
    "adjoint": cmd_adjoint,
    "convergence": cmd_convergence,
    "optimize": cmd_optimize,
}


def make_parser():
    p = argparse.ArgumentParser(prog="wenoadj", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("solve", "adjoint", "convergence", "optimize", "verify"):
        s = sub.add_parser(name)
        s.add_argument("--preset")
        s.add_argument("--config", help="key = value configuration file")
        s.add_argument("--scheme", choices=SCHEMES)
        s.add_argument("--n-cells", dest="n_cells")
        s.add_argument("--dx", type=float, help="alternative to --n-cells")
        s.add_argument("--cfl")
        s.add_argument("--gamma")
        s.add_argument("--eps")
        s.add_argument("--t-final", dest="t_final")
        s.add_argument("--tol")
        s.add_argument("--max-iters", dest="max_iters")
        s.add_argument("--levels", help="convergence ladder runs i = 0..levels")
        s.add_argument("--cold-start", dest="cold_start", action="store_const", const="true")
        s.add_argument("--out-dir", dest="out_dir")
        s.add_argument("--seed")
        s.add_argument("--filter", action="append",
                       help="verify only these suites (repeatable or comma separated)")
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    overrides = {k: getattr(args, k) for k in (
        "scheme", "n_cells", "cfl", "gamma", "eps", "t_final", "tol", "max_iters",
        "levels", "cold_start", "out_dir", "seed")}
    try:
        file_values = read_config_file(args.config) if args.config else {}
        preset = args.preset or file_values.pop("preset", None)
        cfg = build_config(preset, file_values, overrides)
        if args.dx is not None:
            cfg = replace(cfg, n_cells=Grid1D.from_spacing(cfg.a, cfg.b, args.dx).n_cells)
        if args.command == "verify":
            names = None
            if args.filter:
                names = [n.strip() for f in args.filter for n in f.split(",") if n.strip()]
            return cmd_verify(cfg, names)
        return COMMANDS[args.command](cfg)
    except ConfigurationError as exc:
        print(f"wenoadj: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WenoAdjError as exc:
        print(f"wenoadj: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
