"""Config-driven command line front end.

Subcommands mirror the solvers::

    elastoqp solve-linear        --config CFG.toml [--out PATH] [--quiet]
    elastoqp solve-exact         --config CFG.toml ...   (path minimization)
    elastoqp solve-riemann       --config CFG.toml ...
    elastoqp solve-viscous       --config CFG.toml ...
    elastoqp verify-convergence  --config CFG.toml ...
    elastoqp check-admissibility --config CFG.toml ...

Every subcommand reads one TOML config (schema in the README; the config's
[solver].name must match the subcommand) and writes one CSV.  Field solvers
emit one row per node with columns x, t, u, sigma, w1, w2, case, branch plus
solver-specific extras; verify-convergence emits one row per viscosity;
check-admissibility runs the named exact solver and emits its violation list.
Floats are rendered with %.17g and files are written atomically (temp file +
rename), so identical configs produce byte-identical output.

Exit codes: 0 success, 2 config parse/validation error, 3 solver failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile
from dataclasses import dataclass, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import riemann as riemann_mod
from . import viscous as viscous_mod
from .admissibility import check_boundary_admissibility, check_entropy
from .core import ModelConstants, PiecewiseFn, ProblemSpec, check_level_set
from .errors import ConfigError, ParseError, SolverError, ValidationError
from .fields import FieldGrid, Grid
from .linear import BoundaryCombo, BoundaryComboPair, LinearProblem, solve_linear
from .variational import PathCostParams, solve_variational

__all__ = [
    "GridSection",
    "LinearSection",
    "RunConfig",
    "RunResult",
    "parse_config",
    "parse_config_text",
    "render_config",
    "run",
    "check_admissibility_run",
    "main",
]

_SOLVERS = ("linear", "variational", "riemann", "viscous", "verify")

_SUBCOMMANDS = {
    "solve-linear": "linear",
    "solve-exact": "variational",
    "solve-riemann": "riemann",
    "solve-viscous": "viscous",
    "verify-convergence": "verify",
}

_MISSING = object()


@dataclass(frozen=True)
class GridSection:
    x_max: float
    t_max: float
    nx: int
    nt: int


@dataclass(frozen=True)
class LinearSection:
    ubar: float
    bc: tuple[BoundaryCombo, ...]


@dataclass(frozen=True)
class RunConfig:
    solver: str
    output: str
    constants: ModelConstants
    u0: PiecewiseFn
    sigma0: PiecewiseFn | None
    ub: PiecewiseFn | None
    sigmab: PiecewiseFn | None
    grid: GridSection | None
    linear: LinearSection | None
    variational: PathCostParams
    viscous: viscous_mod.ViscousConfig | None
    viscous_system: bool
    convergence: tuple[float, ...] | None
    level_set_tol: float


@dataclass(frozen=True)
class RunResult:
    solver: str
    output: str
    rows: int


# ---------------------------------------------------------------- parsing


def _expect_table(raw, name):
    if not isinstance(raw, dict):
        raise ParseError(f"[{name}] must be a table")
    return raw


def _get(tbl, name, key, types, default=_MISSING):
    if key not in tbl:
        if default is _MISSING:
            raise ParseError(f"[{name}] is missing required key '{key}'")
        return default
    val = tbl[key]
    if isinstance(val, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        raise ParseError(f"[{name}].{key} has wrong type (got bool)")
    if not isinstance(val, types):
        raise ParseError(f"[{name}].{key} has wrong type (got {type(val).__name__})")
    return val


def _float(tbl, name, key, default=_MISSING):
    if key not in tbl:
        if default is _MISSING:
            raise ParseError(f"[{name}] is missing required key '{key}'")
        return default
    return float(_get(tbl, name, key, (int, float)))


def _float_list(raw, where):
    if not isinstance(raw, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
    ):
        raise ParseError(f"{where} must be an array of numbers")
    return [float(v) for v in raw]


def _parse_piecewise(raw, where) -> PiecewiseFn:
    tbl = _expect_table(raw, where)
    kind = _get(tbl, where, "kind", str)
    try:
        if kind == "constant":
            return PiecewiseFn.constant(_float(tbl, where, "value"))
        if kind == "step":
            return PiecewiseFn.step(
                _float(tbl, where, "x0"),
                _float(tbl, where, "left"),
                _float(tbl, where, "right"),
            )
        if kind == "pieces":
            return PiecewiseFn(
                tuple(_float_list(_get(tbl, where, "breakpoints", list), where)),
                tuple(_float_list(_get(tbl, where, "values", list), where)),
                tuple(_float_list(_get(tbl, where, "slopes", list), where)),
            )
        if kind == "knots":
            return PiecewiseFn.from_knots(
                _float_list(_get(tbl, where, "xs", list), where),
                _float_list(_get(tbl, where, "ys", list), where),
            )
    except ValueError as exc:
        raise ValidationError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}.kind must be constant, step, pieces, or knots")


def parse_config(path) -> RunConfig:
    """Read and validate a TOML run configuration from a file."""
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode("utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


def parse_config_text(text: str) -> RunConfig:
    """Parse a TOML run configuration from a string."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"invalid TOML: {exc}") from exc

    if "solver" not in doc:
        raise ParseError("config needs a [solver] table")
    sol_tbl = _expect_table(doc["solver"], "solver")
    solver = _get(sol_tbl, "solver", "name", str)
    if solver not in _SOLVERS:
        raise ValidationError(f"[solver].name must be one of {_SOLVERS}")
    output = _get(sol_tbl, "solver", "output", str)
    if not output:
        raise ValidationError("[solver].output must be a nonempty path")
    level_set_tol = _float(sol_tbl, "solver", "level_set_tol", 1e-12)

    if "constants" not in doc:
        raise ParseError("config needs a [constants] table")
    const_tbl = _expect_table(doc["constants"], "constants")
    try:
        constants = ModelConstants(
            k=_float(const_tbl, "constants", "k"),
            j=_get(const_tbl, "constants", "j", int),
            c=_float(const_tbl, "constants", "c"),
        )
    except ValueError as exc:
        raise ValidationError(f"[constants]: {exc}") from exc

    if "initial" not in doc:
        raise ParseError("config needs an [initial] table")
    init_tbl = _expect_table(doc["initial"], "initial")
    u0 = _parse_piecewise(_get(init_tbl, "initial", "u0", dict), "initial.u0")
    sigma0 = None
    if "sigma0" in init_tbl:
        sigma0 = _parse_piecewise(init_tbl["sigma0"], "initial.sigma0")

    ub = sigmab = None
    if "boundary" in doc:
        bd_tbl = _expect_table(doc["boundary"], "boundary")
        if "ub" in bd_tbl:
            ub = _parse_piecewise(bd_tbl["ub"], "boundary.ub")
        if "sigmab" in bd_tbl:
            sigmab = _parse_piecewise(bd_tbl["sigmab"], "boundary.sigmab")

    grid = None
    if "grid" in doc:
        g = _expect_table(doc["grid"], "grid")
        grid = GridSection(
            x_max=_float(g, "grid", "x_max"),
            t_max=_float(g, "grid", "t_max"),
            nx=_get(g, "grid", "nx", int),
            nt=_get(g, "grid", "nt", int),
        )
        if grid.x_max <= 0 or grid.t_max <= 0:
            raise ValidationError("[grid] extents must be positive")
        if grid.nx < 2 or grid.nt < 2:
            raise ValidationError("[grid] needs nx >= 2 and nt >= 2")

    linear = None
    if "linear" in doc:
        lt = _expect_table(doc["linear"], "linear")
        bc_raw = _get(lt, "linear", "bc", list, [])
        combos = []
        for i, item in enumerate(bc_raw):
            where = f"linear.bc[{i}]"
            it = _expect_table(item, where)
            try:
                combos.append(BoundaryCombo(
                    alpha=_float(it, where, "alpha"),
                    beta=_float(it, where, "beta"),
                    gamma=_parse_piecewise(_get(it, where, "gamma", dict), f"{where}.gamma"),
                ))
            except SolverError as exc:
                raise ValidationError(f"{where}: {exc}") from exc
        linear = LinearSection(ubar=_float(lt, "linear", "ubar"), bc=tuple(combos))

    try:
        var_tbl = _expect_table(doc.get("variational", {}), "variational")
        variational = PathCostParams(
            quad_points=_get(var_tbl, "variational", "quad_points", int, 256),
            n_tau=_get(var_tbl, "variational", "n_tau", int, 256),
            search_tol=_float(var_tbl, "variational", "search_tol", 1e-9),
            y_max=_float(var_tbl, "variational", "y_max", None),
        )
    except ValueError as exc:
        raise ValidationError(f"[variational]: {exc}") from exc

    viscous_cfg = None
    viscous_system = False
    if "viscous" in doc:
        vt = _expect_table(doc["viscous"], "viscous")
        scheme_name = _get(vt, "viscous", "scheme", str, "explicit")
        try:
            scheme = viscous_mod.Scheme(scheme_name)
        except ValueError as exc:
            raise ValidationError(
                "[viscous].scheme must be 'explicit' or 'semi-implicit'"
            ) from exc
        snap = vt.get("snapshot_times")
        if snap is not None:
            snap = tuple(_float_list(snap, "[viscous].snapshot_times"))
        viscous_system = _get(vt, "viscous", "system", bool, False)
        try:
            viscous_cfg = viscous_mod.ViscousConfig(
                epsilon=_float(vt, "viscous", "epsilon"),
                length=_float(vt, "viscous", "length"),
                nx=_get(vt, "viscous", "nx", int),
                t_end=_float(vt, "viscous", "t_end"),
                cfl_safety=_float(vt, "viscous", "cfl_safety", 0.4),
                scheme=scheme,
                snapshot_times=snap,
                far_guard_tol=_float(vt, "viscous", "far_guard_tol", 1e-6),
                max_steps=_get(vt, "viscous", "max_steps", int, 100_000_000),
            )
        except ValueError as exc:
            raise ValidationError(f"[viscous]: {exc}") from exc

    convergence = None
    if "convergence" in doc:
        ct = _expect_table(doc["convergence"], "convergence")
        convergence = tuple(_float_list(_get(ct, "convergence", "epsilons", list),
                                        "[convergence].epsilons"))
        if not convergence or any(e <= 0 for e in convergence):
            raise ValidationError("[convergence].epsilons must be positive")
        if any(b >= a for a, b in zip(convergence, convergence[1:])):
            raise ValidationError("[convergence].epsilons must be strictly decreasing")

    cfg = RunConfig(
        solver=solver, output=output, constants=constants,
        u0=u0, sigma0=sigma0, ub=ub, sigmab=sigmab,
        grid=grid, linear=linear, variational=variational,
        viscous=viscous_cfg, viscous_system=viscous_system,
        convergence=convergence, level_set_tol=level_set_tol,
    )
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    need_grid = cfg.solver in ("linear", "variational", "riemann")
    if need_grid and cfg.grid is None:
        raise ValidationError(f"solver '{cfg.solver}' needs a [grid] table")
    if cfg.solver == "linear":
        if cfg.linear is None:
            raise ValidationError("solver 'linear' needs a [linear] table")
        if cfg.sigma0 is None:
            raise ValidationError("solver 'linear' needs initial.sigma0")
        if len(cfg.linear.bc) > 2:
            raise ValidationError("[linear].bc supports at most two conditions")
    if cfg.solver in ("variational", "riemann", "viscous", "verify"):
        if cfg.ub is None:
            raise ValidationError(f"solver '{cfg.solver}' needs boundary.ub")
    if cfg.solver in ("viscous", "verify") and cfg.viscous is None:
        raise ValidationError(f"solver '{cfg.solver}' needs a [viscous] table")
    if cfg.solver == "verify" and cfg.convergence is None:
        raise ValidationError("solver 'verify' needs [convergence].epsilons")
    if cfg.solver == "riemann":
        if not (cfg.u0.is_constant and cfg.ub.is_constant):
            raise ValidationError("solver 'riemann' needs constant u0 and ub")

    # level-set consistency whenever the scalar reduction will be used
    scalar_reduction = (
        cfg.solver in ("variational", "riemann", "verify")
        or (cfg.solver == "viscous" and not cfg.viscous_system)
    )
    if scalar_reduction:
        spec = _problem_spec(cfg)
        report = check_level_set(spec, tol=cfg.level_set_tol)
        if not report.ok:
            raise ValidationError(
                f"data leave the level set: max residual {report.max_residual:.3g} "
                f"exceeds tol {report.tol:.3g}"
            )


def _problem_spec(cfg: RunConfig) -> ProblemSpec:
    """Assemble the ProblemSpec, deriving stresses on the level set if absent."""
    sh, c = cfg.constants.shift, cfg.constants.c
    sigma0 = cfg.sigma0 if cfg.sigma0 is not None else cfg.u0.scaled(sh).shifted(c)
    sigmab = cfg.sigmab
    if sigmab is None and cfg.ub is not None:
        sigmab = cfg.ub.scaled(sh).shifted(c)
    return ProblemSpec(cfg.constants, cfg.u0, sigma0, cfg.ub, sigmab)


# --------------------------------------------------------------- rendering


def _fmt_float(v: float) -> str:
    if v != v or v in (float("inf"), float("-inf")):
        raise ValidationError("config floats must be finite")
    return repr(float(v))


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, str):
        escaped = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(v, (list, tuple)):
        return "[ " + ", ".join(_fmt_value(x) for x in v) + " ]"
    if isinstance(v, dict):
        inner = ", ".join(f"{k} = {_fmt_value(x)}" for k, x in v.items())
        return "{ " + inner + " }"
    raise TypeError(f"cannot render {type(v).__name__}")


def _pw_doc(fn: PiecewiseFn) -> dict:
    if fn.is_constant:
        return {"kind": "constant", "value": fn.values[0]}
    return {
        "kind": "pieces",
        "breakpoints": list(fn.breakpoints),
        "values": list(fn.values),
        "slopes": list(fn.slopes),
    }


def render_config(cfg: RunConfig) -> str:
    """Emit canonical TOML; parse_config_text(render_config(cfg)) == cfg.

    Piecewise functions are rendered in the explicit "pieces" form unless
    constant, so the round trip normalizes step/knots inputs.
    """
    out = []

    def section(name, items):
        pairs = [(key, v) for key, v in items if v is not None]
        if not pairs:
            return
        out.append(f"[{name}]")
        for key, v in pairs:
            out.append(f"{key} = {_fmt_value(v)}")
        out.append("")

    section("solver", [
        ("name", cfg.solver),
        ("output", cfg.output),
        ("level_set_tol", cfg.level_set_tol),
    ])
    section("constants", [
        ("k", cfg.constants.k), ("j", cfg.constants.j), ("c", cfg.constants.c),
    ])
    if cfg.grid is not None:
        section("grid", [
            ("x_max", cfg.grid.x_max), ("t_max", cfg.grid.t_max),
            ("nx", cfg.grid.nx), ("nt", cfg.grid.nt),
        ])
    section("initial", [
        ("u0", _pw_doc(cfg.u0)),
        ("sigma0", _pw_doc(cfg.sigma0) if cfg.sigma0 is not None else None),
    ])
    if cfg.ub is not None or cfg.sigmab is not None:
        section("boundary", [
            ("ub", _pw_doc(cfg.ub) if cfg.ub is not None else None),
            ("sigmab", _pw_doc(cfg.sigmab) if cfg.sigmab is not None else None),
        ])
    if cfg.linear is not None:
        section("linear", [
            ("ubar", cfg.linear.ubar),
            ("bc", [
                {"alpha": b.alpha, "beta": b.beta, "gamma": _pw_doc(b.gamma)}
                for b in cfg.linear.bc
            ]),
        ])
    section("variational", [
        ("quad_points", cfg.variational.quad_points),
        ("n_tau", cfg.variational.n_tau),
        ("search_tol", cfg.variational.search_tol),
        ("y_max", cfg.variational.y_max),
    ])
    if cfg.viscous is not None:
        v = cfg.viscous
        section("viscous", [
            ("epsilon", v.epsilon), ("length", v.length), ("nx", v.nx),
            ("t_end", v.t_end), ("cfl_safety", v.cfl_safety),
            ("scheme", v.scheme.value),
            ("system", cfg.viscous_system),
            ("snapshot_times",
             list(v.snapshot_times) if v.snapshot_times is not None else None),
            ("far_guard_tol", v.far_guard_tol),
            ("max_steps", v.max_steps),
        ])
    if cfg.convergence is not None:
        section("convergence", [("epsilons", list(cfg.convergence))])
    return "\n".join(out)


# ----------------------------------------------------------------- running


def _fmt_csv(v) -> str:
    if isinstance(v, (np.floating, float)):
        return "%.17g" % v
    if isinstance(v, (np.bool_, bool)):
        return "1" if v else "0"
    return str(v)


def _write_csv_atomic(path: str, header, rows):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    count = 0
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt_csv(v) for v in row])
                count += 1
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return count


def _field_rows(field: FieldGrid, meta_keys):
    grid = field.grid
    for r, t in enumerate(grid.t):
        for cidx, x in enumerate(grid.x):
            row = [x, t, field.u[r, cidx], field.sigma[r, cidx],
                   field.w1[r, cidx], field.w2[r, cidx],
                   field.case[r, cidx], field.branch[r, cidx]]
            row.extend(field.meta[key][r, cidx] for key in meta_keys)
            yield row


def _write_field(path: str, field: FieldGrid, meta_keys=()) -> int:
    header = ["x", "t", "u", "sigma", "w1", "w2", "case", "branch", *meta_keys]
    return _write_csv_atomic(path, header, _field_rows(field, meta_keys))


def _exact_field(cfg: RunConfig) -> FieldGrid:
    """The field of cfg's exact solver (variational or riemann)."""
    if cfg.solver == "riemann":
        data = riemann_mod.RiemannData(
            constants=cfg.constants, u0=cfg.u0(0.0), ub=cfg.ub(0.0))
        grid = Grid.regular(cfg.grid.x_max, cfg.grid.t_max, cfg.grid.nx, cfg.grid.nt)
        return riemann_mod.solve_riemann(data, grid)
    spec = _problem_spec(cfg)
    grid = Grid.regular(cfg.grid.x_max, cfg.grid.t_max, cfg.grid.nx, cfg.grid.nt)
    return solve_variational(spec, grid, cfg.variational)


def run(cfg: RunConfig) -> RunResult:
    """Execute the configured solver and write its CSV."""
    if cfg.solver == "linear":
        bc = cfg.linear.bc
        boundary = None
        if len(bc) == 1:
            boundary = bc[0]
        elif len(bc) == 2:
            boundary = BoundaryComboPair(bc[0], bc[1])
        problem = LinearProblem.from_primitive(
            cfg.linear.ubar, cfg.constants.k, cfg.u0, cfg.sigma0, boundary)
        grid = Grid.regular(cfg.grid.x_max, cfg.grid.t_max, cfg.grid.nx,
                            cfg.grid.nt, include_t0=True)
        rows = _write_field(cfg.output, solve_linear(problem, grid))
    elif cfg.solver == "variational":
        rows = _write_field(cfg.output, _exact_field(cfg),
                            meta_keys=("value", "y", "tau1", "tau2"))
    elif cfg.solver == "riemann":
        rows = _write_field(cfg.output, _exact_field(cfg),
                            meta_keys=("on_threshold",))
    elif cfg.solver == "viscous":
        spec = _problem_spec(cfg)
        if cfg.viscous_system:
            vrun = viscous_mod.solve_system_viscous(spec, cfg.viscous)
        else:
            vrun = viscous_mod.solve_scalar_viscous(spec, cfg.viscous)
        field = viscous_mod.viscous_to_fieldgrid(vrun)
        rows = _write_field(cfg.output, field)
    else:  # verify
        spec = _problem_spec(cfg)
        report = viscous_mod.verify_convergence(
            spec, cfg.convergence, cfg.viscous, cfg.variational)
        rows = _write_csv_atomic(
            cfg.output,
            ["epsilon", "l1_error", "monotone"],
            (
                [eps, err, report.monotone]
                for eps, err in zip(report.epsilons, report.l1_errors)
            ),
        )
    return RunResult(solver=cfg.solver, output=cfg.output, rows=rows)


def check_admissibility_run(cfg: RunConfig) -> RunResult:
    """Run cfg's exact solver and write its admissibility violations CSV."""
    if cfg.solver not in ("variational", "riemann"):
        raise ValidationError(
            "check-admissibility needs [solver].name variational or riemann")
    spec = _problem_spec(cfg)
    field = _exact_field(cfg)
    trace = check_boundary_admissibility(field, spec)
    entropy = check_entropy(field, spec)
    rows = _write_csv_atomic(
        cfg.output,
        ["kind", "t", "x", "value", "datum", "detail"],
        (
            [v.kind, v.t, v.x, v.value, v.datum, v.detail]
            for v in (*trace.violations, *entropy.violations)
        ),
    )
    return RunResult(solver="check-admissibility", output=cfg.output, rows=rows)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="elastoqp",
        description="Quarter-plane solvers for the nonconservative "
                    "elastodynamics system; see the README for the config schema.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*_SUBCOMMANDS, "check-admissibility"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out", default=None, help="override the output path")
        p.add_argument("--quiet", action="store_true", help="suppress the summary line")
        p.add_argument("--validate-only", action="store_true",
                       help="parse and validate the config, run nothing")
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(args.config)
        expected = _SUBCOMMANDS.get(args.command)
        if expected is not None and cfg.solver != expected:
            raise ValidationError(
                f"config names solver '{cfg.solver}' but subcommand "
                f"'{args.command}' needs '{expected}'"
            )
        if args.command == "check-admissibility" and cfg.solver not in (
                "variational", "riemann"):
            raise ValidationError(
                "check-admissibility needs [solver].name variational or riemann")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.out is not None:
        cfg = replace(cfg, output=args.out)
    if args.validate_only:
        if not args.quiet:
            print(f"config ok: solver '{cfg.solver}', output '{cfg.output}'")
        return 0
    try:
        if args.command == "check-admissibility":
            result = check_admissibility_run(cfg)
        else:
            result = run(cfg)
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    if not args.quiet:
        print(f"wrote {result.rows} rows to {result.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
