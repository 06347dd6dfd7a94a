"""Command-line front end: ``fucik {eigen,curve,sweep,verify,oracle}``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

from . import bounds, homog
from .config import Config
from .errors import FucikError, NonConvergence
from .oracles import fucik_curve_const, plap_eigen
from .problem import BC, FucikPoint, ProblemSpec
from .shoot1d import curve_point_shoot, integrate, lambda1_shoot, solution_profile
from .varfem import Mesh1D, lambda1_fem, mountain_pass_c, node_match_curve
from .weights import AffineModulated, Constant, PiecewisePeriodic, ScaledWeight, Trig

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_BOUND = 0, 2, 3, 4

CSV_COLUMNS = ("experiment", "method", "bc", "p", "s", "epsilon", "value_eps", "value_limit",
               "abs_error", "bound_value", "within_bound", "residual", "runtime_ms")

log = logging.getLogger("fucik")


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{float(x):.17g}"


def _short(x) -> str:
    return f"{x:#.6g}"


def write_csv(path: Path, records, timings: bool) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CSV_COLUMNS)
        for r in records:
            out.writerow([
                r.experiment, r.method, r.bc, _num(r.p),
                "" if r.s is None else _num(r.s),
                "" if r.epsilon is None else _num(r.epsilon),
                _num(r.value_eps), _num(r.value_limit), _num(r.abs_error),
                _num(r.bound_value), _num(r.within_bound), _num(r.residual),
                _num(r.runtime_ms) if timings else "",
            ])


def write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if hasattr(obj, "__dict__"):
        return obj.__dict__
    return str(obj)


def _record(experiment, method, cfg, s, eps, value, limit, bound=None, residual=0.0, ms=0.0):
    err = abs(value - limit) if limit is not None else None
    within = None if bound is None or err is None else bool(err <= bound)
    return homog.SweepRecord(experiment, method, cfg.bc.value, cfg.problem.p, s, eps, value,
                             limit if limit is not None else float("nan"),
                             err if err is not None else float("nan"), bound, within,
                             residual, ms)


def _mean_value(w):
    """Constant weak* limit of a periodic weight (or its eps-family), else None."""
    if isinstance(w, AffineModulated):
        base = _mean_value(w.base)
        return None if base is None or w.b != 0.0 else base + w.a
    if isinstance(w, (Constant, Trig, PiecewisePeriodic, ScaledWeight)):
        return w.average()
    return None


def _constant_limits(cfg: Config):
    """Averaged constants of both weights when their weak limits are constant."""
    mc, nc = _mean_value(cfg.weight_m()), _mean_value(cfg.weight_n())
    if mc is None or nc is None:
        return None
    return mc, nc


# subcommands ----------------------------------------------------------------

def cmd_eigen(cfg: Config, jobs: int, out: Path) -> tuple[int, dict, list]:
    p, interval, bc = cfg.problem.p, cfg.problem.interval, cfg.bc
    m = cfg.weight_m()
    t0 = time.perf_counter()
    if cfg.experiment.method == "fem":
        value = lambda1_fem(m, p, Mesh1D(*interval, cfg.experiment.n_elems), bc)
        method = "fem"
    else:
        value = lambda1_shoot(m, p, interval, bc, h=cfg.experiment.step)
        method = "shoot"
    ms = 1e3 * (time.perf_counter() - t0)
    mc = _mean_value(m)
    L = interval[1] - interval[0]
    if mc is not None:
        limit = 0.0 if bc is BC.NEUMANN else plap_eigen(1, p, L, bc, mc)
    else:
        limit = lambda1_shoot(m.weak_limit(), p, interval, bc)
    print(f"lambda1 = {_short(value)}")
    rec = _record("eigen", method, cfg, None, None, value, limit, residual=0.0, ms=ms)
    return EXIT_OK, {"lambda1": value, "lambda1_limit": limit}, [rec]


def _curve_point(cfg: Config, s: float):
    spec = cfg.spec()
    method = cfg.experiment.method
    if method == "node_match":
        return node_match_curve(spec, s, "fem", n_elems=cfg.experiment.n_elems)
    if method == "mountain_pass":
        mesh = Mesh1D(*cfg.problem.interval, cfg.experiment.n_elems)
        res = mountain_pass_c(spec.m, spec.n, s, spec.p, mesh, spec.bc, cfg.experiment.waypoints)
        return FucikPoint.from_alpha(res.value, s, "mountain_pass", rel_tol=2e-2)
    return curve_point_shoot(spec, s, h=cfg.experiment.step)


def _write_profile(out: Path, cfg: Config, point) -> None:
    spec = cfg.spec()
    if point.method == "shoot":
        traj = solution_profile(spec, point, h=cfg.experiment.step)
    else:
        traj = integrate(spec, point.alpha, point.beta, h=cfg.experiment.step)
    stride = max(1, (len(traj) - 1) // 2000)
    with open(out / f"curve_{point.s:g}.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("x", "u", "flux"))
        for i in range(0, len(traj), stride):
            w.writerow((_num(traj.x[i]), _num(traj.u[i]), _num(traj.w[i])))


def cmd_curve(cfg: Config, jobs: int, out: Path) -> tuple[int, dict, list]:
    p, bc = cfg.problem.p, cfg.bc
    L = cfg.problem.interval[1] - cfg.problem.interval[0]
    consts = _constant_limits(cfg)
    records, points = [], []
    for s in cfg.experiment.s_list:
        t0 = time.perf_counter()
        point = _curve_point(cfg, s)
        ms = 1e3 * (time.perf_counter() - t0)
        if consts is not None:
            a0, b0 = fucik_curve_const(s, p, L, consts[0], consts[1], bc)
        else:
            spec0 = cfg.spec()
            lim = curve_point_shoot(ProblemSpec(p, spec0.interval, bc, spec0.m.weak_limit(),
                                                spec0.n.weak_limit()), s)
            a0, b0 = lim.alpha, lim.beta
        records.append(_record("curve-alpha", point.method, cfg, s, None, point.alpha, a0,
                               residual=point.residual, ms=ms))
        records.append(_record("curve-beta", point.method, cfg, s, None, point.beta, b0,
                               residual=point.residual, ms=ms))
        points.append({"s": s, "alpha": point.alpha, "beta": point.beta, "node": point.node,
                       "method": point.method})
        print(f"s = {_short(s)}  alpha = {_short(point.alpha)}  beta = {_short(point.beta)}")
        _write_profile(out, cfg, point)
    return EXIT_OK, {"points": points}, records


def _run_sweep(cfg: Config, jobs: int):
    e, p, bc = cfg.experiment, cfg.problem.p, cfg.bc
    interval = cfg.problem.interval
    m, n = cfg.weight_m(), cfg.weight_n()
    if not e.eps_list:
        raise FucikError("a sweep needs a non-empty eps_list")
    if e.sweep == "lambda1":
        return homog.sweep_lambda1(m, p, bc, e.eps_list, interval, jobs, e.step)
    if e.sweep == "curve":
        method = "node_match" if e.method == "node_match" else "shoot"
        return homog.sweep_curve(m, n, p, bc, e.s_list, e.eps_list, method, interval, jobs,
                                 e.n_elems, e.step)
    return homog.sweep_general(m, n, p, bc, e.s_list, e.eps_list, interval, jobs, h=e.step)


def _fits(records) -> list[dict]:
    return [{"experiment": k[0], "s": k[1], **fit.__dict__}
            for k, fit in homog.fits_by_s(records).items()]


def cmd_sweep(cfg: Config, jobs: int, out: Path) -> tuple[int, dict, list]:
    records = _run_sweep(cfg, jobs)
    failed = [r for r in records if r.failed]
    fits = _fits(records)
    for f in fits:
        print(f"{f['experiment']} s = {_short(f['s'])}  slope = {_short(f['slope'])}  "
              f"r2 = {_short(f['r_squared'])}")
    report = {"fits": fits, "failures": [r.error for r in failed],
              "constants": _constants(cfg)}
    status = EXIT_SOLVER if failed else EXIT_OK
    return status, report, records


def _constants(cfg: Config) -> dict:
    m, n = cfg.weight_m(), cfg.weight_n()
    L = cfg.problem.interval[1] - cfg.problem.interval[0]
    try:
        tc = bounds.RateConstants.for_weights(cfg.problem.p, m, n, L)
    except FucikError as exc:
        return {"unavailable": str(exc)}
    return tc.as_dict()


def cmd_verify(cfg: Config, jobs: int, out: Path) -> tuple[int, dict, list]:
    p, bc = cfg.problem.p, cfg.bc
    L = cfg.problem.interval[1] - cfg.problem.interval[0]
    spec = cfg.spec()
    verdicts = []
    records = []
    if bc in (BC.DIRICHLET, BC.NEUMANN):
        for s in cfg.experiment.s_list:
            point = _curve_point(cfg, s)
            rep = bounds.curve_bounds_check(point, spec.m, spec.n, p, bc, L)
            verdicts.append({"check": "curve bounds", "s": s, "passed": rep.passed,
                             "detail": rep.as_dict()})
    if cfg.experiment.eps_list:
        records = _run_sweep(cfg, jobs)
        for r in records:
            if r.within_bound is not None:
                verdicts.append({"check": f"{r.experiment} bound", "s": r.s,
                                 "epsilon": r.epsilon, "passed": r.within_bound})
    failed_solver = [r.error for r in records if r.failed]
    ok = all(v["passed"] for v in verdicts)
    print(f"verify: {sum(v['passed'] for v in verdicts)}/{len(verdicts)} checks passed")
    report = {"verdicts": verdicts, "constants": _constants(cfg), "fits": _fits(records),
              "failures": failed_solver}
    if failed_solver:
        return EXIT_SOLVER, report, records
    return (EXIT_OK if ok else EXIT_BOUND), report, records


def cmd_oracle(cfg: Config, jobs: int, out: Path) -> tuple[int, dict, list]:
    p, bc = cfg.problem.p, cfg.bc
    L = cfg.problem.interval[1] - cfg.problem.interval[0]
    consts = _constant_limits(cfg)
    if consts is None:
        raise FucikError("the oracle needs weights with constant averages")
    mc, nc = consts
    k0 = 0 if bc is BC.NEUMANN else 1
    eig = {f"lambda{k}": plap_eigen(k, p, L, bc, mc) for k in (k0, k0 + 1)}
    for k, v in eig.items():
        print(f"{k} = {_short(v)}")
    records = [_record("oracle-eigen", "closed-form", cfg, None, None, v, v)
               for v in eig.values()]
    points = []
    if bc in (BC.DIRICHLET, BC.NEUMANN):
        for s in cfg.experiment.s_list:
            a, b = fucik_curve_const(s, p, L, mc, nc, bc)
            print(f"s = {_short(s)}  alpha = {_short(a)}  beta = {_short(b)}")
            points.append({"s": s, "alpha": a, "beta": b})
            records.append(_record("oracle-alpha", "closed-form", cfg, s, None, a, a))
            records.append(_record("oracle-beta", "closed-form", cfg, s, None, b, b))
    return EXIT_OK, {"eigenvalues": eig, "points": points}, records


COMMANDS = {"eigen": cmd_eigen, "curve": cmd_curve, "sweep": cmd_sweep, "verify": cmd_verify,
            "oracle": cmd_oracle}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fucik", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="TOML experiment file")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker threads for sweeps (default: number of processors)")
    parser.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
    parser.add_argument("--dump-config", action="store_true",
                        help="print the resolved config as TOML and exit")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = Config.load(args.config) if args.config else Config()
        cfg = cfg.with_kind(args.command)
        cfg.validate()
    except FucikError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.dump_config:
        sys.stdout.write(cfg.dumps())
        return EXIT_OK
    out = args.out if args.out is not None else Path(cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    report = {"command": args.command, "config": cfg.to_dict(), "c_p": bounds.CP_CHOICE}
    records = []
    try:
        status, payload, records = COMMANDS[args.command](cfg, max(1, args.jobs), out)
        report.update(payload)
    except NonConvergence as exc:
        status = EXIT_SOLVER
        report["error"] = f"{type(exc).__name__}: {exc}"
    except FucikError as exc:
        status = EXIT_CONFIG
        report["error"] = f"{type(exc).__name__}: {exc}"
    report["status"] = status
    write_csv(out / "results.csv", records, cfg.output.timings)
    write_json(out / "report.json", report)
    if "error" in report:
        print(report["error"], file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
