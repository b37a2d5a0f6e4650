"""Command-line interface: config ingestion, orchestration, report emission.

Commands
--------
variance      closed-form condition integral / variance for a phi-spec
clt-run       full Monte Carlo CLT experiment -> report.json, samples.csv
sweep         variance-bound sweep over n with p = floor(n^theta) -> CSV
semicircle    pooled spectrum vs the semicircle law (KS + histogram table)
kernel-check  resolvent covariance against the kernel prediction

Exit codes: 0 ok, 2 degenerate with --strict, 64 usage/config, 65 numeric
(failed checks or divergent integrals), 70 replica failure.

phi-specs on the command line follow the mini-grammar
``[weight*]family:par[,par]`` joined by ``+``, e.g.
``0.5*chebyshev:2+1.0*monomial:4``.  Families: chebyshev:k, monomial:k,
gauss[:center[,width]], coshgauss:rate[,center[,width]],
resolvent_re:re,im, resolvent_im:re,im.  Config files use JSON records
(see ``config-schema`` in the README), which additionally cover the
poisson_smoothed / cosh_weighted / combination nesting.

Every run writes manifest.json (config snapshot, tool version, master seed,
duration, per-check outcomes) even when the run fails after config parse.
All floating-point output carries 17 significant digits so files round-trip
bit-exactly; identical config + seed gives byte-identical report.json and
samples.csv for any worker count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, harness, theory
from .ensemble import DILUTED_GRAPH, EnsembleParams
from .errors import (
    ConfigError,
    DivergenceError,
    GraphCltError,
    NumericalError,
    ParameterError,
    RangeError,
    ReplicaError,
    UnsupportedTransformError,
)
from .harness import ExperimentConfig, StatisticsFlags, Tolerances
from .testfn import (
    ChebyshevPoly,
    Combination,
    CoshWeighted,
    GaussianBump,
    Monomial,
    ResolventIm,
    ResolventRe,
    TestFunction,
    from_record,
)

EXIT_OK = 0
EXIT_DEGENERATE = 2
EXIT_USAGE = 64
EXIT_NUMERIC = 65
EXIT_REPLICA = 70

ENV_WORKERS = "GRAPHCLT_WORKERS"
SCHEMA_VERSION = 1


# ----------------------------------------------------------------------------
# canonical serialization: 17 significant digits, sorted keys, LF endings
# ----------------------------------------------------------------------------

def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise NumericalError(f"refusing to serialize non-finite value {x!r}")
    return format(float(x), ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    """Deterministic JSON text: sorted keys, fixed float formatting."""
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{pad_in}{json.dumps(str(k))}: {dumps_canonical(v, indent + 1)}"
            for k, v in sorted(obj.items()))
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{pad_in}{dumps_canonical(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _complex_dict(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


# ----------------------------------------------------------------------------
# phi-spec mini-grammar
# ----------------------------------------------------------------------------

def _build_term(family: str, params: list[float]):
    if family == "chebyshev":
        return ChebyshevPoly(int(params[0]))
    if family == "monomial":
        return Monomial(int(params[0]))
    if family == "gauss":
        center = params[0] if params else 0.0
        width = params[1] if len(params) > 1 else 1.0
        return GaussianBump(center, width)
    if family == "coshgauss":
        center = params[1] if len(params) > 1 else 0.0
        width = params[2] if len(params) > 2 else 1.0
        return CoshWeighted(params[0], GaussianBump(center, width))
    if family == "resolvent_re":
        return ResolventRe(complex(params[0], params[1]))
    if family == "resolvent_im":
        return ResolventIm(complex(params[0], params[1]))
    raise ConfigError(f"unknown phi family {family!r} in spec")


def parse_phi_spec(text: str) -> TestFunction:
    """Parse '[w*]family:par[,par]' terms joined by '+'."""
    terms = []
    for raw in text.split("+"):
        piece = raw.strip()
        if not piece:
            raise ConfigError(f"empty term in phi-spec {text!r}")
        weight = 1.0
        if "*" in piece:
            head, piece = piece.split("*", 1)
            try:
                weight = float(head)
            except ValueError:
                raise ConfigError(f"bad weight {head!r} in phi-spec {text!r}")
        family, _, tail = piece.partition(":")
        family = family.strip().lower()
        try:
            params = [float(tok) for tok in tail.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"bad parameters in phi-spec term {piece!r}")
        try:
            fn = _build_term(family, params)
        except (IndexError, ParameterError) as exc:
            raise ConfigError(f"bad phi-spec term {piece!r}: {exc}") from exc
        terms.append((weight, fn))
    if len(terms) == 1 and terms[0][0] == 1.0:
        return terms[0][1]
    return Combination(tuple(terms))


def _phi_from_entry(entry) -> TestFunction:
    if isinstance(entry, str):
        return parse_phi_spec(entry)
    if isinstance(entry, dict):
        return from_record(entry)
    raise ConfigError(f"test function entries must be spec strings or records, got {entry!r}")


def _complex_from_entry(entry) -> complex:
    if isinstance(entry, dict):
        return complex(float(entry["re"]), float(entry["im"]))
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    raise ConfigError(f"complex points must be [re, im] or {{re, im}}, got {entry!r}")


# ----------------------------------------------------------------------------
# experiment config files
# ----------------------------------------------------------------------------

def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    if payload.get("schema") != SCHEMA_VERSION:
        raise ConfigError(
            f"config {path} must declare \"schema\": {SCHEMA_VERSION}, "
            f"got {payload.get('schema')!r}")
    return payload


def load_experiment_config(path: str) -> ExperimentConfig:
    doc = _load_json(path)
    try:
        ens = doc["ensemble"]
        params = EnsembleParams(n=int(ens["n"]), p=float(ens["p"]),
                                kind=ens.get("kind", DILUTED_GRAPH),
                                seed=int(ens.get("seed", 0)))
        replicas = int(doc["replicas"])
    except (KeyError, TypeError, ValueError, ParameterError) as exc:
        raise ConfigError(f"bad ensemble/replicas section in {path}: {exc}") from exc
    phis = tuple(_phi_from_entry(e) for e in doc.get("test_functions", []))
    points = tuple(_complex_from_entry(e) for e in doc.get("resolvent_points", []))
    try:
        flags = StatisticsFlags(**doc.get("statistics", {}))
        tols = Tolerances(**doc.get("tolerances", {}))
    except TypeError as exc:
        raise ConfigError(f"bad statistics/tolerances section in {path}: {exc}") from exc
    kwargs = {}
    if "char_grid" in doc:
        kwargs["char_grid"] = tuple(float(x) for x in doc["char_grid"])
    return ExperimentConfig(ensemble=params, replicas=replicas,
                            test_functions=phis, resolvent_points=points,
                            statistics=flags, tolerances=tols, **kwargs)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Canonical config snapshot; reparsing it reproduces the run bit-exactly."""
    return {
        "schema": SCHEMA_VERSION,
        "ensemble": {"n": cfg.ensemble.n, "p": cfg.ensemble.p,
                     "kind": cfg.ensemble.kind, "seed": cfg.ensemble.seed},
        "replicas": cfg.replicas,
        "test_functions": [phi.to_record() for phi in cfg.test_functions],
        "resolvent_points": [_complex_dict(z) for z in cfg.resolvent_points],
        "statistics": vars(cfg.statistics).copy(),
        "tolerances": vars(cfg.tolerances).copy(),
        "char_grid": list(cfg.char_grid),
    }


def config_from_dict(doc: dict) -> ExperimentConfig:
    ens = doc["ensemble"]
    return ExperimentConfig(
        ensemble=EnsembleParams(n=int(ens["n"]), p=float(ens["p"]),
                                kind=ens.get("kind", DILUTED_GRAPH),
                                seed=int(ens.get("seed", 0))),
        replicas=int(doc["replicas"]),
        test_functions=tuple(_phi_from_entry(e) for e in doc.get("test_functions", [])),
        resolvent_points=tuple(_complex_from_entry(e) for e in doc.get("resolvent_points", [])),
        statistics=StatisticsFlags(**doc.get("statistics", {})),
        tolerances=Tolerances(**doc.get("tolerances", {})),
        char_grid=tuple(doc.get("char_grid", (0.0, 0.5, 1.0, 1.5, 2.0))),
    )


# ----------------------------------------------------------------------------
# report / manifest emission
# ----------------------------------------------------------------------------

def report_to_dict(report: harness.CltReport) -> dict:
    phis = []
    for rep in report.phi_reports:
        entry = {
            "label": rep.label,
            "record": rep.record,
            "statistic_mean": rep.statistic_mean,
            "fluctuations": list(rep.fluctuations),
            "variance": rep.variance,
            "skewness": rep.skewness,
            "excess_kurtosis": rep.excess_kurtosis,
            "theory": {"condition_integral": rep.theory.condition_integral,
                       "variance": rep.theory.variance,
                       "degenerate": rep.theory.degenerate},
            "checks": rep.checks,
            "ks": None,
            "char_function": None,
        }
        if rep.ks_statistic is not None:
            entry["ks"] = {"statistic": rep.ks_statistic, "p_value": rep.ks_p_value}
        if rep.char_grid is not None:
            entry["char_function"] = {
                "grid": list(rep.char_grid),
                "empirical": [_complex_dict(v) for v in rep.char_empirical],
                "predicted": list(rep.char_predicted),
            }
        phis.append(entry)
    kernels = [{
        "z1": _complex_dict(k.z1), "z2": _complex_dict(k.z2),
        "empirical": _complex_dict(k.empirical),
        "predicted": _complex_dict(k.predicted),
        "ratio": _complex_dict(k.ratio),
        "within_band": k.within_band,
    } for k in report.kernel_reports]
    columns = {f"phi_{j}": rep.label for j, rep in enumerate(report.phi_reports)}
    columns.update({f"z_{j}": f"{z.real:g}{z.imag:+g}j"
                    for j, z in enumerate(report.resolvent_points)})
    return {
        "schema": SCHEMA_VERSION,
        "ensemble": {"n": report.ensemble.n, "p": report.ensemble.p,
                     "kind": report.ensemble.kind, "seed": report.ensemble.seed},
        "replicas": report.replicas,
        "rescaling_factor": math.sqrt(float(report.ensemble.p) / report.ensemble.n),
        "test_functions": phis,
        "kernel": kernels,
        "semicircle_ks": report.semicircle_ks,
        "passes": report.passes,
        "sample_columns": columns,
    }


def samples_csv_text(cfg: ExperimentConfig, report: harness.CltReport) -> str:
    header = ["replica"]
    header += [f"phi_{j}" for j in range(len(cfg.test_functions))]
    for j in range(len(cfg.resolvent_points)):
        header += [f"z_{j}_re", f"z_{j}_im"]
    lines = [",".join(header)]
    for res in report.replica_results:
        row = [str(res.index)]
        row += [format_float(v) for v in res.statistics]
        for tr in res.traces:
            row += [format_float(tr.real), format_float(tr.imag)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_manifest(out_dir: Path, command: str, config_doc, seed, started: float,
                   checks: dict, exit_code: int) -> None:
    manifest = {
        "schema": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "master_seed": seed,
        "config": config_doc,
        "duration_seconds": time.time() - started,
        "checks": checks,
        "exit_code": exit_code,
    }
    write_text(out_dir / "manifest.json", dumps_canonical(manifest) + "\n")


def resolve_workers(flag_value) -> int:
    if flag_value is not None:
        workers = flag_value
    else:
        env = os.environ.get(ENV_WORKERS)
        if env is not None:
            try:
                workers = int(env)
            except ValueError:
                raise ConfigError(f"{ENV_WORKERS} must be an integer, got {env!r}")
        else:
            workers = os.cpu_count() or 1
    if workers < 1:
        raise ConfigError(f"worker count must be >= 1, got {workers}")
    return workers


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_variance(args) -> int:
    phi = parse_phi_spec(args.fn)
    rule = theory.QuadratureRule.gauss_chebyshev(args.order) if args.order else None
    result = theory.clt_variance(phi, rule=rule)
    print(f"phi          : {phi.label}")
    print(f"I[phi]       : {format_float(result.condition_integral)}")
    print(f"V[phi]       : {format_float(result.variance)}")
    print(f"degenerate   : {str(result.degenerate).lower()}")
    payload = {"phi": phi.label, "record": phi.to_record(),
               "condition_integral": result.condition_integral,
               "variance": result.variance, "degenerate": result.degenerate}
    if args.sobolev is not None:
        try:
            norm = phi.sobolev_norm(args.sobolev)
        except DivergenceError as exc:
            print(f"sobolev s={args.sobolev:g}: divergent "
                  f"(partial sums {[format_float(v) for v in exc.partial_sums[-4:]]})")
            return EXIT_NUMERIC
        print(f"||phi||_{args.sobolev:g} : {format_float(norm)}")
        payload["sobolev"] = {"s": args.sobolev, "norm": norm}
        if phi.transform_note:
            print(f"note         : {phi.transform_note}")
            payload["transform_note"] = phi.transform_note
    if args.json:
        write_text(Path(args.json), dumps_canonical(payload) + "\n")
    if result.degenerate and args.strict:
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_clt_run(args) -> int:
    cfg = load_experiment_config(args.config)
    workers = resolve_workers(args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()
    config_doc = config_to_dict(cfg)
    checks: dict = {}
    code = EXIT_NUMERIC
    try:
        report = harness.run_experiment(cfg, workers=workers)
        checks = dict(report.passes)
        code = EXIT_OK if report.passes.get("all_pass", False) else EXIT_NUMERIC
        write_text(out_dir / "report.json",
                   dumps_canonical(report_to_dict(report)) + "\n")
        write_text(out_dir / "samples.csv", samples_csv_text(cfg, report))
        for rep in report.phi_reports:
            flag = "DEGENERATE" if rep.checks.get("degenerate") else ""
            print(f"{rep.label}: mean={rep.statistic_mean:.6g} "
                  f"var={rep.variance:.6g} theory={rep.theory.variance:.6g} {flag}")
        if report.semicircle_ks is not None:
            print(f"semicircle KS: {report.semicircle_ks:.6g}")
        print(f"checks: {checks}")
        return code
    except ReplicaError as exc:
        checks = {"replica_failure": exc.replica}
        code = EXIT_REPLICA
        print(f"error: {exc}", file=sys.stderr)
        return code
    finally:
        write_manifest(out_dir, "clt-run", config_doc, cfg.ensemble.seed,
                       started, checks, code)


def cmd_sweep(args) -> int:
    doc = _load_json(args.config)
    try:
        n_grid = [int(n) for n in doc["n_grid"]]
        theta = float(doc["theta"])
        z = _complex_from_entry(doc["z"])
        replicas = int(doc["replicas"])
        seed = int(doc.get("seed", 0))
        envelope = float(doc.get("envelope", 10.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad sweep config {args.config}: {exc}") from exc
    if not n_grid:
        raise ConfigError("sweep needs a non-empty n_grid")
    if not 0.0 < theta < 1.0:
        raise ConfigError(f"dilute regime requires 0 < theta < 1, got {theta}")
    workers = resolve_workers(args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()
    checks: dict = {}
    code = EXIT_NUMERIC
    try:
        rows = harness.variance_bound_check(n_grid, theta, z, replicas, seed,
                                            envelope=envelope, workers=workers)
        lines = ["n,p,rescaled_variance,kernel_prediction,ratio"]
        for row in rows:
            lines.append(",".join([str(row.n), format_float(row.p),
                                   format_float(row.rescaled_variance),
                                   format_float(row.kernel_value),
                                   format_float(row.ratio)]))
            print(f"n={row.n:6d} p={row.p:6g} var={row.rescaled_variance:.6e} "
                  f"kernel={row.kernel_value:.6e} ratio={row.ratio:.3f}")
        write_text(out_dir / "bounds.csv", "\n".join(lines) + "\n")
        checks["bound_pass"] = all(r.within_envelope for r in rows)
        if "sobolev_check" in doc:
            sub = doc["sobolev_check"]
            phi = _phi_from_entry(sub["fn"])
            params = EnsembleParams(n=max(n_grid),
                                    p=float(math.floor(max(n_grid) ** theta)),
                                    seed=seed)
            sb = harness.sobolev_bound_check(
                params, replicas, phi, smoothness=float(sub.get("s", 1.75)),
                envelope=float(sub.get("envelope", 100.0)), workers=workers)
            checks["sobolev_bound_pass"] = sb.holds
            print(f"sobolev bound: (p/n)Var = {sb.rescaled_variance:.6e} <= "
                  f"{sb.envelope:g} * ||phi||_{sb.smoothness:g}^2 = "
                  f"{sb.envelope * sb.sobolev_norm**2:.6e}: {sb.holds}")
        code = EXIT_OK if all(checks.values()) else EXIT_NUMERIC
        return code
    except ReplicaError as exc:
        checks = {"replica_failure": exc.replica}
        code = EXIT_REPLICA
        print(f"error: {exc}", file=sys.stderr)
        return code
    finally:
        write_manifest(out_dir, "sweep", doc, doc.get("seed", 0), started, checks, code)


def cmd_semicircle(args) -> int:
    cfg = load_experiment_config(args.config)
    workers = resolve_workers(args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()
    checks: dict = {}
    code = EXIT_NUMERIC
    try:
        spectra = harness.replica_spectra(cfg, workers=workers)
        pooled = np.sort(np.concatenate(spectra))
        ks = harness.ks_distance_semicircle(pooled)
        lo = min(-2.2, float(pooled[0]) - 1e-9)
        hi = max(2.2, float(pooled[-1]) + 1e-9)
        counts, edges = np.histogram(pooled, bins=64, range=(lo, hi))
        width = edges[1] - edges[0]
        total = pooled.shape[0]
        print(f"pooled KS distance: {format_float(ks)}")
        print("bin_center,empirical_density,semicircle_density")
        lines = ["bin_center,empirical_density,semicircle_density"]
        for j in range(64):
            center = 0.5 * (edges[j] + edges[j + 1])
            emp = counts[j] / (total * width)
            sc = theory.semicircle_density(center)
            line = ",".join([format_float(center), format_float(emp), format_float(sc)])
            print(line)
            lines.append(line)
        write_text(out_dir / "histogram.csv", "\n".join(lines) + "\n")
        checks["semicircle_pass"] = bool(ks < cfg.tolerances.semicircle_ks)
        code = EXIT_OK if checks["semicircle_pass"] else EXIT_NUMERIC
        return code
    except ReplicaError as exc:
        checks = {"replica_failure": exc.replica}
        code = EXIT_REPLICA
        print(f"error: {exc}", file=sys.stderr)
        return code
    finally:
        write_manifest(out_dir, "semicircle", config_to_dict(cfg),
                       cfg.ensemble.seed, started, checks, code)


def cmd_kernel_check(args) -> int:
    cfg = load_experiment_config(args.config)
    if not cfg.statistics.kernel:
        cfg = ExperimentConfig(
            ensemble=cfg.ensemble, replicas=cfg.replicas,
            test_functions=cfg.test_functions,
            resolvent_points=cfg.resolvent_points,
            statistics=StatisticsFlags(
                clt=bool(cfg.test_functions), kernel=True,
                semicircle=False, variance_bound=False,
                char_function=False),
            tolerances=cfg.tolerances, char_grid=cfg.char_grid)
    workers = resolve_workers(args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()
    checks: dict = {}
    code = EXIT_NUMERIC
    try:
        report = harness.run_experiment(cfg, workers=workers)
        for k in report.kernel_reports:
            print(f"z1={k.z1:.3g} z2={k.z2:.3g} empirical={k.empirical:.6g} "
                  f"predicted={k.predicted:.6g} |ratio-1|="
                  f"{abs(k.ratio - 1):.3f} ok={k.within_band}")
        checks["kernel_pass"] = all(k.within_band for k in report.kernel_reports)
        code = EXIT_OK if checks["kernel_pass"] else EXIT_NUMERIC
        return code
    except ReplicaError as exc:
        checks = {"replica_failure": exc.replica}
        code = EXIT_REPLICA
        print(f"error: {exc}", file=sys.stderr)
        return code
    finally:
        write_manifest(out_dir, "kernel-check", config_to_dict(cfg),
                       cfg.ensemble.seed, started, checks, code)


# ----------------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphclt",
                     description="spectral fluctuation laboratory for dilute random graphs")
    parser.add_argument("--version", action="version", version=f"graphclt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_var = sub.add_parser("variance", help="closed-form condition integral and variance")
    p_var.add_argument("--fn", required=True, help="phi-spec, e.g. 'monomial:2'")
    p_var.add_argument("--sobolev", type=float, default=None, metavar="S",
                       help="also report the Sobolev norm at smoothness S")
    p_var.add_argument("--order", type=int, default=None,
                       help="fixed quadrature order (default: self-refining)")
    p_var.add_argument("--json", default=None, help="also write a JSON result file")
    p_var.add_argument("--strict", action="store_true",
                       help="exit 2 when the condition integral is degenerate")
    p_var.set_defaults(func=cmd_variance)

    for name, func, desc in (
            ("clt-run", cmd_clt_run, "run a Monte Carlo CLT experiment"),
            ("sweep", cmd_sweep, "variance-bound sweep over n with p = floor(n^theta)"),
            ("semicircle", cmd_semicircle, "pooled spectrum vs the semicircle law"),
            ("kernel-check", cmd_kernel_check, "resolvent covariance vs the kernel")):
        p = sub.add_parser(name, help=desc)
        p.add_argument("config", help="JSON config file")
        p.add_argument("--workers", type=int, default=None,
                       help=f"worker processes (default: {ENV_WORKERS} or cpu count)")
        p.add_argument("--out", default=".", help="output directory")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, ParameterError, UnsupportedTransformError, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReplicaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REPLICA
    except (NumericalError, RangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GraphCltError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
