"""Command line front end.

Subcommands: eval (field values or derivative fields), norm (growth
probes), regime (parameter classification), verify (certification
suites), example (bundled boundary data), report (bundled summary).

Exit status: 0 on success with every certification holding, 1 when any
certification fails, 2 on a usage or domain error. JSON reports are
emitted with sorted keys and fixed indentation so identical invocations
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .derivs import (
    DerivField,
    deriv_field,
    dz_dzbar_f,
    sine_moment,
    sine_moment_exact,
    write_deriv_rows,
)
from .elliptic import ellipticity_report
from .kernel import (
    BoundaryData,
    QuadSpec,
    circle_poisson_values,
    poisson_integral,
    read_boundary_csv,
    write_boundary_csv,
)
from .mappings import (
    HypMonomial,
    log_series_boundary,
    log_series_field,
    phase_boundary,
    phase_field,
)
from .norms import KernelQuantity, QUANTITIES, divergence_probe
from .regimes import (
    CertificationRecord,
    certification_grid,
    check_angular_derivative_bound,
    check_scaled_kernel_bound,
    classify,
)

__all__ = ["RunConfig", "UsageError", "main", "run"]

THREADS_ENV = "DISKPOISSON_THREADS"

EXAMPLE_IDS = {
    "hyp-monomial": "4.1",
    "piecewise-phase": "4.2",
    "log-series": "4.3",
}
_ALIAS_TO_ID = {alias: name for name, alias in EXAMPLE_IDS.items()}


class UsageError(Exception):
    """A violated command precondition; the message names it."""


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation, ready to dispatch."""

    command: str
    alpha: Optional[float] = None
    p: Optional[float] = None
    n: int = 1
    nodes: int = 2048
    r_max: float = 0.999
    cutoffs: tuple = (0.9, 0.99, 0.999)
    input_path: Optional[str] = None
    fmt: str = "json"
    seed: int = 0
    threads: int = 1
    output: Optional[str] = None
    extras: dict = field(default_factory=dict)

    def quad(self) -> QuadSpec:
        return QuadSpec(angular_nodes=self.nodes, r_max=self.r_max)


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(fn, items: Sequence, threads: int) -> list:
    """Order-preserving map, optionally on a thread pool."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _jsonable(obj):
    """Recursively coerce to strict-JSON values; infinities become 'inf'."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def _emit_json(payload, cfg: RunConfig) -> None:
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True,
                      allow_nan=False) + "\n"
    _emit(text, cfg.output)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _parse_cutoffs(raw: str) -> tuple:
    try:
        cut = tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError:
        raise UsageError(f"cutoffs must be a comma-separated list of reals, got {raw!r}")
    _require(len(cut) >= 3, "cutoffs must list at least 3 radii (probe precondition)")
    return cut


def _parse_points(raw_points: Sequence[str]) -> np.ndarray:
    pts = []
    for raw in raw_points:
        toks = raw.split(",")
        if len(toks) != 2:
            raise UsageError(f"each --point must be 'r,theta', got {raw!r}")
        try:
            r, theta = float(toks[0]), float(toks[1])
        except ValueError:
            raise UsageError(f"each --point must be 'r,theta' with real entries, got {raw!r}")
        _require(r >= 0.0, f"point radius must be nonnegative, got {r}")
        pts.append(r * complex(math.cos(theta), math.sin(theta)))
    return np.asarray(pts, dtype=complex)


def _load_boundary(cfg: RunConfig) -> tuple:
    """(label, BoundaryData) from --boundary or --example options."""
    example = cfg.extras.get("example")
    if cfg.input_path is not None and example is not None:
        raise UsageError("--boundary and --example are mutually exclusive")
    if cfg.input_path is not None:
        return os.path.basename(cfg.input_path), read_boundary_csv(cfg.input_path)
    if example is not None:
        name, _, F = _build_example(cfg, example)
        return name, F
    raise UsageError("a boundary source is required: --boundary CSV or --example ID")


def _resolve_example_id(raw: str) -> str:
    name = _ALIAS_TO_ID.get(raw, raw)
    if name not in EXAMPLE_IDS:
        known = ", ".join(f"{k} (alias {v})" for k, v in EXAMPLE_IDS.items())
        raise UsageError(f"unknown example id {raw!r}; known: {known}")
    return name


def _build_example(cfg: RunConfig, raw_id: str) -> tuple:
    """(name, params dict, BoundaryData) for a bundled example."""
    name = _resolve_example_id(raw_id)
    samples = cfg.extras.get("samples", 2048)
    if name == "hyp-monomial":
        alpha = cfg.alpha if cfg.alpha is not None else -0.5
        _require(-1.0 < alpha < 0.0,
                 f"hyp-monomial needs alpha in (-1, 0), got {alpha}")
        _require(cfg.n >= 1, f"hyp-monomial needs n >= 1, got {cfg.n}")
        m = HypMonomial(alpha=alpha, n=cfg.n)
        return name, {"alpha": alpha, "n": cfg.n, "samples": samples}, m.boundary(samples)
    if name == "piecewise-phase":
        return name, {"samples": samples}, phase_boundary(samples)
    n_trunc = cfg.extras.get("n_trunc") or None
    F = log_series_boundary(samples, n_trunc)
    used = n_trunc if n_trunc is not None else min(4096, samples // 2 - 1)
    return name, {"samples": samples, "n_trunc": used}, F


def _example_facts(cfg: RunConfig, name: str, params: dict, F: BoundaryData) -> dict:
    if name == "hyp-monomial":
        m = HypMonomial(alpha=params["alpha"], n=params["n"])
        return {
            "boundary_constant": m.boundary_constant(),
            "e1_limit": m.e1_limit(),
        }
    if name == "piecewise-phase":
        return {
            "deriv_sup_norm": (math.pi + 1.0) / math.pi,
            "deriv_l1_mean": 1.0,
            "corner_nodes": list(F.flagged_nodes),
        }
    return {
        "boundary_sup": float(np.max(np.abs(F.values))),
        "n_trunc": params["n_trunc"],
    }


# -- subcommands --------------------------------------------------------


def _cmd_eval(cfg: RunConfig) -> int:
    _require(cfg.alpha is not None, "eval requires --alpha")
    if cfg.input_path is None:
        raise UsageError("eval requires --boundary CSV (theta,re,im)")
    F = read_boundary_csv(cfg.input_path)
    q = cfg.quad()
    raw_points = cfg.extras.get("points") or []
    use_grid = cfg.extras.get("grid", False)
    _require(bool(raw_points) != bool(use_grid),
             "eval needs exactly one of --point (repeatable) or --grid")
    want_field = cfg.extras.get("field", False)

    if want_field:
        _require(cfg.fmt != "json",
                 "derivative fields are CSV only; drop --format json")
        if use_grid:
            fld = deriv_field(cfg.alpha, F, q, n_thetas=cfg.extras["grid_thetas"])
        else:
            pts = _parse_points(raw_points)
            _require(float(np.max(np.abs(pts))) <= q.r_max,
                     f"eval points must satisfy |z| <= r_max = {q.r_max}")
            dz = np.empty(len(pts), dtype=complex)
            dzbar = np.empty(len(pts), dtype=complex)
            for i, z in enumerate(pts):
                dz[i], dzbar[i] = dz_dzbar_f(cfg.alpha, F, complex(z), q)
            fld = DerivField.from_wirtinger(pts, dz, dzbar)
        buf = io.StringIO()
        write_deriv_rows(buf, fld)
        _emit(buf.getvalue(), cfg.output)
        return 0

    if use_grid:
        n_th = cfg.extras["grid_thetas"]
        _require(q.angular_nodes % n_th == 0,
                 "grid-thetas must divide nodes")
        stride = q.angular_nodes // n_th
        rows = []
        for r in q.radial_grid:
            vals = circle_poisson_values(cfg.alpha, F, float(r), q)[::stride]
            thetas = 2.0 * np.pi * np.arange(n_th) / n_th
            rows.extend(
                {"r": float(r), "theta": float(t), "re": float(v.real), "im": float(v.imag)}
                for t, v in zip(thetas, vals)
            )
    else:
        pts = _parse_points(raw_points)
        _require(float(np.max(np.abs(pts))) <= q.r_max,
                 f"eval points must satisfy |z| <= r_max = {q.r_max}")
        rows = []
        for z in pts:
            v = poisson_integral(cfg.alpha, F, complex(z), q)
            rows.append({
                "r": float(abs(z)),
                "theta": float(np.mod(np.angle(z), 2.0 * np.pi)) if abs(z) > 0 else 0.0,
                "re": float(v.real),
                "im": float(v.imag),
            })

    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["r", "theta", "re", "im"])
        for row in rows:
            writer.writerow([repr(row["r"]), repr(row["theta"]),
                             repr(row["re"]), repr(row["im"])])
        _emit(buf.getvalue(), cfg.output)
    else:
        _emit_json({"alpha": cfg.alpha, "nodes": cfg.nodes, "values": rows}, cfg)
    return 0


def _cmd_norm(cfg: RunConfig) -> int:
    _require(cfg.alpha is not None, "norm requires --alpha")
    _require(cfg.p is not None, "norm requires --p (a real >= 1, or inf)")
    label, F = _load_boundary(cfg)
    quantity = cfg.extras.get("quantity", "f")
    kind = cfg.extras.get("kind", "hardy")
    kq = KernelQuantity(cfg.alpha, F, quantity)
    report = divergence_probe(kq, p=cfg.p, cutoffs=cfg.cutoffs, kind=kind,
                              q=cfg.quad(), quantity=quantity, alpha=cfg.alpha)
    payload = json.loads(report.to_json())
    payload["kind"] = kind
    payload["boundary"] = label
    _emit_json(payload, cfg)
    return 0


def _cmd_regime(cfg: RunConfig) -> int:
    _require(cfg.alpha is not None, "regime requires --alpha")
    _require(cfg.p is not None, "regime requires --p (a real >= 1, or inf)")
    rc = classify(cfg.alpha, cfg.p)
    _emit_json({
        "label": rc.label,
        "alpha": rc.alpha,
        "p": rc.p,
        "predictions": sorted(rc.predictions),
    }, cfg)
    return 0


_BUNDLED_ALPHAS = (-0.5, 0.0, 1.0)
_BUNDLED_PS = (1.0, 2.0, 4.0)


def _bundled_boundaries(samples: int = 2048) -> list:
    return [
        ("hyp-monomial", HypMonomial(alpha=-0.5, n=1).boundary(samples)),
        ("piecewise-phase", phase_boundary(samples)),
        ("log-series", log_series_boundary(samples)),
    ]


def _inequality_records(q: QuadSpec, threads: int) -> list:
    records = certification_grid(q)
    boundaries = _bundled_boundaries(q.angular_nodes)

    jobs = []
    for label, F in boundaries:
        for alpha in _BUNDLED_ALPHAS:
            for p in _BUNDLED_PS:
                jobs.append(("angular", alpha, F, p, label))
            jobs.append(("scaled", alpha, F, None, label))

    def run_job(job):
        kind, alpha, F, p, label = job
        if kind == "angular":
            return check_angular_derivative_bound(alpha, F, p, q, label=label)
        return check_scaled_kernel_bound(alpha, F, q, label=label)

    records.extend(_pmap(run_job, jobs, threads))
    return records


def _oracle_records(q: QuadSpec, seed: int, threads: int) -> list:
    records = []
    rng = np.random.default_rng(seed)

    def extension_job(args):
        alpha, n = args
        m = HypMonomial(alpha=alpha, n=n)
        F = m.boundary(q.angular_nodes)
        pts = 0.9 * np.sqrt(rng.uniform(0.0, 1.0, 50)) * np.exp(
            2j * np.pi * rng.uniform(0.0, 1.0, 50))
        worst = 0.0
        for z in pts:
            got = poisson_integral(alpha, F, complex(z), q)
            want = m.value(complex(z))
            scale = max(1e-30, abs(want))
            worst = max(worst, abs(got - want) / scale)
        return CertificationRecord(
            check="kernel_extension_oracle",
            params={"alpha": alpha, "n": n, "points": 50, "seed": seed,
                    "nodes": q.angular_nodes},
            lhs=worst, rhs=1e-6, holds=bool(worst <= 1e-6),
        )

    # rng draws happen in job order; build points eagerly for determinism
    ext_args = [(alpha, n) for alpha in (-0.9, -0.5, -0.1) for n in (1, 2, 3)]
    records.extend([extension_job(a) for a in ext_args])

    def harmonic_job(n):
        F = BoundaryData.from_function(
            lambda t: np.exp(1j * n * np.asarray(t)), q.angular_nodes,
            deriv=lambda t: 1j * n * np.exp(1j * n * np.asarray(t)))
        worst = 0.0
        for k in range(20):
            r = 0.9 * (k + 1) / 20.0
            theta = 2.0 * np.pi * k / 20.0
            z = r * complex(math.cos(theta), math.sin(theta))
            got = poisson_integral(0.0, F, z, q)
            want = (r ** n) * complex(math.cos(n * theta), math.sin(n * theta))
            worst = max(worst, abs(got - want))
        return CertificationRecord(
            check="harmonic_power",
            params={"alpha": 0.0, "n": n, "nodes": q.angular_nodes},
            lhs=worst, rhs=1e-8, holds=bool(worst <= 1e-8),
        )

    records.extend(_pmap(harmonic_job, range(1, 9), threads))

    for alpha in _BUNDLED_ALPHAS:
        for r in (0.25, 0.5, 0.9):
            got = sine_moment(alpha, r)
            want = sine_moment_exact(alpha, r)
            rel = abs(got - want) / abs(want)
            records.append(CertificationRecord(
                check="sine_moment_identity",
                params={"alpha": alpha, "r": r},
                lhs=rel, rhs=1e-6, holds=bool(rel <= 1e-6),
            ))
    return records


def _cmd_verify(cfg: RunConfig) -> int:
    suite = cfg.extras.get("suite", "inequalities")
    q = cfg.quad()
    records = []
    if suite in ("inequalities", "all"):
        records.extend(_inequality_records(q, cfg.threads))
    if suite in ("oracle", "all"):
        records.extend(_oracle_records(q, cfg.seed, cfg.threads))
    all_hold = all(rec.holds for rec in records)
    _emit_json({
        "suite": suite,
        "n_records": len(records),
        "all_hold": all_hold,
        "records": [rec.as_dict() for rec in records],
    }, cfg)
    return 0 if all_hold else 1


def _cmd_example(cfg: RunConfig) -> int:
    raw_id = cfg.extras.get("example")
    _require(raw_id is not None, "example requires --id")
    name, params, F = _build_example(cfg, raw_id)
    payload = {
        "id": name,
        "alias": EXAMPLE_IDS[name],
        "params": params,
        "samples": F.n_samples,
        "facts": _example_facts(cfg, name, params, F),
    }
    export = cfg.extras.get("export")
    if export is not None:
        write_boundary_csv(export, F)
        payload["export"] = export
    _emit_json(payload, cfg)
    return 0


def _identity_fields(radii: Sequence[float], n_thetas: int = 64) -> list:
    fields = []
    pts: list = []
    for r in radii:
        thetas = 2.0 * np.pi * np.arange(n_thetas) / n_thetas
        pts = pts + list(r * np.exp(1j * thetas))
        arr = np.asarray(pts, dtype=complex)
        fields.append(DerivField.from_wirtinger(
            arr, np.ones(len(arr), dtype=complex), np.zeros(len(arr), dtype=complex)))
    return fields


def _nested_fields(builder, radii: Sequence[float], n_thetas: int = 64) -> list:
    """Nested polar-circle fields: field k covers radii[:k+1]."""
    fields = []
    pts: list = []
    for r in radii:
        thetas = 2.0 * np.pi * np.arange(n_thetas) / n_thetas
        pts = pts + list(r * np.exp(1j * thetas))
        fields.append(builder(np.asarray(pts, dtype=complex)))
    return fields


def _ellipticity_summaries(k_list: Sequence[float]) -> list:
    out = []
    m = HypMonomial(alpha=-0.5, n=1)
    hyp_radii = (1.0 - 1e-3, 1.0 - 1e-4, 1.0 - 1e-5, 1.0 - 1e-6)
    rep = ellipticity_report(
        _nested_fields(lambda pts: m.field(pts, tol=1e-6), hyp_radii), k_list)
    out.append({"example": "hyp-monomial", "report": asdict(rep)})

    rep = ellipticity_report(
        _nested_fields(phase_field, (0.9, 0.99, 0.999)), k_list)
    out.append({"example": "piecewise-phase", "report": asdict(rep)})

    rep = ellipticity_report(
        _nested_fields(lambda pts: log_series_field(pts, n_trunc=50000),
                       (0.9, 0.99, 0.999)), k_list)
    out.append({"example": "log-series", "report": asdict(rep)})

    rep = ellipticity_report(_identity_fields((0.25, 0.5, 0.75)), k_list)
    out.append({"example": "identity", "report": asdict(rep)})
    return out


def _divergence_summaries(q: QuadSpec) -> list:
    m = HypMonomial(alpha=-0.5, n=1)
    cut = (0.9, 0.99, 0.999)
    out = []
    picks = {"dz": 0, "dzbar": 1, "dr": 2}
    for quantity in ("dr", "dz", "dzbar"):
        fn = lambda z, i=picks[quantity]: m.derivs(z, tol=1e-12)[i]
        for p in (1.0, 2.0):
            rep = divergence_probe(fn, p=p, cutoffs=cut, kind="hardy", q=q,
                                   quantity=quantity, alpha=-0.5)
            row = json.loads(rep.to_json())
            row["kind"] = "hardy"
            out.append(row)
    fn = lambda z: m.derivs(z, tol=1e-12)[1]
    for p in (1.0, 1.5, 2.0, 3.0):
        rep = divergence_probe(fn, p=p, cutoffs=cut, kind="bergman", q=q,
                               quantity="dzbar", alpha=-0.5)
        row = json.loads(rep.to_json())
        row["kind"] = "bergman"
        out.append(row)
    return out


_REGIME_SAMPLES = (
    (-0.9, 1.0), (-0.5, 1.0), (-0.5, 2.0), (-0.1, 12.0),
    (0.0, 1.0), (0.0, 2.0), (0.0, math.inf),
    (0.5, 3.0), (1.0, 2.0),
)


def _cmd_report(cfg: RunConfig) -> int:
    q = cfg.quad()
    records = _inequality_records(q, cfg.threads)
    records.extend(_oracle_records(q, cfg.seed, cfg.threads))
    failures = [rec.as_dict() for rec in records if not rec.holds]
    regimes = []
    for alpha, p in _REGIME_SAMPLES:
        rc = classify(alpha, p)
        regimes.append({"alpha": alpha, "p": p, "label": rc.label,
                        "predictions": sorted(rc.predictions)})
    payload = {
        "certifications": {
            "n_records": len(records),
            "all_hold": not failures,
            "failures": failures,
        },
        "regimes": regimes,
        "divergence": _divergence_summaries(q),
        "ellipticity": _ellipticity_summaries((1.0, 10.0, 100.0)),
    }
    _emit_json(payload, cfg)
    return 0 if not failures else 1


# -- argument parsing ----------------------------------------------------


def _add_common(sp, nodes=True, output=True) -> None:
    if nodes:
        sp.add_argument("--nodes", type=int, default=2048,
                        help="angular quadrature nodes (even, >= 16)")
        sp.add_argument("--r-max", type=float, default=0.999,
                        help="outermost radius of the radial grid")
    sp.add_argument("--threads", type=int, default=None,
                    help=f"worker threads (default ${THREADS_ENV} or 1)")
    if output:
        sp.add_argument("--output", default=None,
                        help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="diskpoisson",
        description="Weighted Poisson extensions on the unit disk: "
                    "evaluation, growth probes, and inequality certification.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate the kernel extension of a boundary CSV")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--boundary", required=True, help="CSV with header theta,re,im")
    sp.add_argument("--point", action="append", default=None, metavar="R,THETA")
    sp.add_argument("--grid", action="store_true",
                    help="evaluate on the full polar grid")
    sp.add_argument("--grid-thetas", type=int, default=64,
                    help="output angles per circle (must divide --nodes)")
    sp.add_argument("--field", action="store_true",
                    help="emit all four partial derivatives as CSV")
    sp.add_argument("--format", choices=("json", "csv"), default=None,
                    help="json for values (default), csv for tables")
    _add_common(sp)

    sp = sub.add_parser("norm", help="growth probe of a Hardy or Bergman norm")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--p", type=float, required=True, help="norm order; 'inf' allowed")
    sp.add_argument("--quantity", choices=QUANTITIES, default="f")
    sp.add_argument("--kind", choices=("hardy", "bergman"), default="hardy")
    sp.add_argument("--cutoffs", default="0.9,0.99,0.999")
    sp.add_argument("--boundary", default=None, help="CSV with header theta,re,im")
    sp.add_argument("--example", default=None, help="bundled example id or alias")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--n-trunc", type=int, default=None)
    sp.add_argument("--samples", type=int, default=2048)
    _add_common(sp)

    sp = sub.add_parser("regime", help="classify (alpha, p) and list predictions")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--p", type=float, required=True, help="norm order; 'inf' allowed")
    _add_common(sp, nodes=False)

    sp = sub.add_parser("verify", help="run a certification suite")
    sp.add_argument("--suite", choices=("inequalities", "oracle", "all"),
                    default="inequalities")
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)

    sp = sub.add_parser("example", help="describe or export a bundled example")
    sp.add_argument("--id", required=True, dest="example_id",
                    help="hyp-monomial (4.1), piecewise-phase (4.2), log-series (4.3)")
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--n-trunc", type=int, default=None)
    sp.add_argument("--samples", type=int, default=2048)
    sp.add_argument("--export", default=None, help="write the boundary CSV here")
    _add_common(sp, nodes=False)

    sp = sub.add_parser("report", help="bundled summary: certifications, regimes, probes")
    sp.add_argument("--seed", type=int, default=0)
    _add_common(sp)

    return ap


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    threads = getattr(ns, "threads", None)
    if threads is None:
        threads = _default_threads()
    _require(threads >= 1, f"threads must be >= 1, got {threads}")
    nodes = getattr(ns, "nodes", 2048)
    r_max = getattr(ns, "r_max", 0.999)
    _require(nodes >= 16 and nodes % 2 == 0,
             f"nodes must be an even integer >= 16, got {nodes}")
    _require(0.0 < r_max <= 1.0 - 1e-6,
             f"r-max must lie in (0, 1 - 1e-6], got {r_max}")
    alpha = getattr(ns, "alpha", None)
    if alpha is not None:
        _require(alpha > -1.0, f"alpha must exceed -1, got {alpha}")
    p = getattr(ns, "p", None)
    if p is not None:
        _require(p >= 1.0, f"p must satisfy 1 <= p <= inf, got {p}")
    n = getattr(ns, "n", 1)
    cutoffs = (_parse_cutoffs(ns.cutoffs) if getattr(ns, "cutoffs", None)
               else (0.9, 0.99, 0.999))
    samples = getattr(ns, "samples", 2048)
    _require(samples >= 16 and samples % 2 == 0,
             f"samples must be an even integer >= 16, got {samples}")
    n_trunc = getattr(ns, "n_trunc", None)
    if n_trunc is not None:
        _require(n_trunc >= 2, f"n-trunc must be >= 2, got {n_trunc}")
    fmt = getattr(ns, "format", None)
    if fmt is None:
        fmt = "csv" if getattr(ns, "field", False) else "json"

    extras = {}
    for key, attr in (("points", "point"), ("grid", "grid"),
                      ("grid_thetas", "grid_thetas"), ("field", "field"),
                      ("quantity", "quantity"), ("kind", "kind"),
                      ("suite", "suite"), ("example", "example"),
                      ("export", "export"), ("samples", "samples"),
                      ("n_trunc", "n_trunc")):
        if hasattr(ns, attr):
            extras[key] = getattr(ns, attr)
    if getattr(ns, "example_id", None) is not None:
        extras["example"] = ns.example_id

    return RunConfig(
        command=ns.command,
        alpha=alpha,
        p=p,
        n=n,
        nodes=nodes,
        r_max=r_max,
        cutoffs=cutoffs,
        input_path=getattr(ns, "boundary", None),
        fmt=fmt,
        seed=getattr(ns, "seed", 0),
        threads=threads,
        output=getattr(ns, "output", None),
        extras=extras,
    )


_DISPATCH = {
    "eval": _cmd_eval,
    "norm": _cmd_norm,
    "regime": _cmd_regime,
    "verify": _cmd_verify,
    "example": _cmd_example,
    "report": _cmd_report,
}


def run(cfg: RunConfig) -> int:
    """Dispatch a validated config; returns the process exit status."""
    handler = _DISPATCH.get(cfg.command)
    if handler is None:
        raise UsageError(f"unknown command {cfg.command!r}")
    return handler(cfg)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
        cfg = _config_from_args(ns)
        return run(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
