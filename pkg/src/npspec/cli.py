"""Command line interface: ``npspec {spectrum,grauert,decay,verify}``.

Exit codes: 0 success, 1 computation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, grauert, np_kernel, report, spectrum, svgplot, verify
from .curves import CurveSpec, fourier_coeffs_of_q, make_curve
from .errors import NPSpecError, TooFewPairs, UnsupportedKind

N_MIN, N_MAX = 16, 4096
FLOOR_MIN, FLOOR_MAX = 1e-15, 1e-3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    curve: CurveSpec | None = None
    N: int = 256
    floor: float = 1e-12
    output: str | None = None
    format: str = "json"
    plot: bool = False

    def __post_init__(self):
        if self.N % 2 or not N_MIN <= self.N <= N_MAX:
            raise UsageError(f"--N must be even with {N_MIN} <= N <= {N_MAX}, got {self.N}")
        if not (FLOOR_MIN <= self.floor <= FLOOR_MAX):
            raise UsageError(f"--floor must lie in [{FLOOR_MIN:g}, {FLOOR_MAX:g}], got {self.floor:g}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"--format must be json or csv, got {self.format!r}")
        if self.plot and not self.output:
            raise UsageError("--plot requires --out to name the SVG file")


def parse_curve(text: str) -> CurveSpec:
    """Inline JSON object or path to a JSON file."""
    src = text.strip()
    if not src.startswith("{"):
        path = Path(src)
        if not path.is_file():
            raise UsageError(f"--curve must be a JSON object or an existing file, got {text!r}")
        src = path.read_text()
    try:
        obj = json.loads(src)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--curve is not valid JSON: {exc}") from exc
    try:
        return CurveSpec.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"--curve rejected: {exc}") from exc


def _emit(cfg: RunConfig, suffix: str, payload: dict, header=None, rows=None) -> None:
    """Write JSON (or CSV when a table is given) to ``<out>_<suffix>`` or stdout."""
    if cfg.format == "csv" and header is not None:
        text, ext = report.csv_text(header, rows), "csv"
    else:
        text, ext = report.dumps(payload) + "\n", "json"
    if cfg.output:
        path = Path(f"{cfg.output}_{suffix}.{ext}")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def _closed_eps(spec: CurveSpec) -> float | None:
    try:
        return grauert.modified_radius(spec).value
    except UnsupportedKind:
        return None


def _plot(cfg: RunConfig, suffix: str, spec_: spectrum.Spectrum, eps: float | None, fit=None) -> None:
    lam2n = spec_.even_magnitudes()
    n = np.arange(1, lam2n.size + 1)
    keep = lam2n > cfg.floor
    series = [svgplot.Series("ln|lambda_2n|", n[keep], np.log(lam2n[keep]), "markers")]
    if eps is not None and math.isfinite(eps) and keep.any():
        nn = n[keep]
        series.append(svgplot.Series(f"slope -{eps:.4f}", nn, math.log(0.5) - eps * nn, "dashed"))
    if fit is not None:
        series.append(svgplot.Series(f"fit rate {fit.rate:.4f}", fit.n, math.log(fit.prefactor) - fit.rate * fit.n))
    svg = svgplot.line_chart(series, f"{spec_.curve_ref}, N={spec_.N}", "n", "ln|lambda_2n|")
    path = Path(f"{cfg.output}_{suffix}.svg")
    path.write_text(svg)
    print(f"wrote {path}")


def cmd_spectrum(cfg: RunConfig) -> int:
    curve = make_curve(cfg.curve)
    op = np_kernel.nystrom_matrix(curve, cfg.N)
    s = spectrum.np_spectrum(op)
    rows = [(i + 1, lam) for i, lam in enumerate(s.lambdas)]
    _emit(cfg, "spectrum", s.to_json(), ["n", "lambda"], rows)
    if cfg.format == "csv" and cfg.output:
        # the raw NP matrix, for cross-checks with external solvers
        np_kernel.write_csv(op, f"{cfg.output}_matrix.csv")
        print(f"wrote {cfg.output}_matrix.csv")
    if cfg.plot:
        _plot(cfg, "spectrum", s, _closed_eps(cfg.curve))
    return 0


def grauert_report(spec: CurveSpec) -> dict:
    out: dict = {"curve": spec.label}
    try:
        out["closed_form"] = grauert.closed_form_radius(spec).to_json()
    except UnsupportedKind:
        out["closed_form"] = None
    if spec.kind.startswith("limacon"):
        A = float(spec.params["A"])
        naive = grauert.closed_form_radius(CurveSpec.limacon(A, "naive"))
        opt = grauert.closed_form_radius(CurveSpec.limacon(A, "optimal"))
        out["naive"] = naive.value
        out["optimal"] = opt.value
        out["eps_c_of_optimal"] = grauert.chebyshev_rate(opt.value)
    curve = make_curve(spec)
    coeffs = fourier_coeffs_of_q(curve, 256)
    finite = spec.kind in ("circle", "ellipse", "limacon_naive", "fourier")
    out["trigpoly"] = grauert.trigpoly_radius(coeffs, curve_ref=spec.label).to_json() if finite else None
    try:
        out["strip_upper"] = grauert.strip_radius_upper(coeffs, curve_ref=spec.label).to_json()
    except NPSpecError as exc:
        out["strip_upper"] = {"error": str(exc)}
    best = out["closed_form"] or out["trigpoly"]
    eps = grauert.modified_radius(spec).value if out["closed_form"] else best["value"] if best else None
    out["eps_modified"] = eps
    out["eps_c"] = grauert.chebyshev_rate(eps) if eps is not None else None
    return out


def cmd_grauert(cfg: RunConfig) -> int:
    _emit(cfg, "grauert", grauert_report(cfg.curve))
    return 0


def cmd_decay(cfg: RunConfig) -> int:
    curve = make_curve(cfg.curve)
    s = spectrum.np_spectrum(np_kernel.nystrom_matrix(curve, cfg.N))
    g = grauert_report(cfg.curve)
    eps = g["eps_modified"]
    out = {"curve": cfg.curve.label, "N": cfg.N, "floor": cfg.floor, "eps": eps}
    fit = None
    try:
        fit = analysis.decay_fit(s, cfg.floor)
        out["status"] = "ok"
        out["fit"] = fit.to_json()
        out["ratio"] = fit.rate / eps if eps not in (None, 0.0) and math.isfinite(eps) else None
    except TooFewPairs:
        n, _ = analysis.fit_window(s, cfg.floor)
        out["status"] = "below floor everywhere" if n.size == 0 else f"only {n.size} pairs above floor"
        out["fit"] = None
        out["ratio"] = None
    _emit(cfg, "decay", out)
    if cfg.plot:
        _plot(cfg, "decay", s, eps, fit)
    return 0


def cmd_verify(only, output: str | None = None) -> int:
    results = verify.run(only)
    print(verify.format_table(results))
    if output:
        for r in results:
            report.write_json(f"{output}_verify_{r.cid:02d}.json",
                              {"id": r.cid, "name": r.name, "group": r.group,
                               "passed": r.passed, "detail": r.detail})
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="npspec", description="NP operator spectra on analytic curves")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", required=True, help="curve JSON object or path to a JSON file")
    common.add_argument("--N", type=int, default=256, help="number of quadrature nodes (even, 16..4096)")
    common.add_argument("--floor", type=float, default=1e-12, help="noise floor (1e-15..1e-3)")
    common.add_argument("--out", help="output path prefix; stdout when omitted")
    common.add_argument("--format", default="json", help="json or csv")
    common.add_argument("--plot", action="store_true", help="also write an SVG chart")
    for name in ("spectrum", "grauert", "decay"):
        sub.add_parser(name, parents=[common])
    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--only", help=f"comma-separated groups {verify.GROUPS} or criterion numbers")
    v.add_argument("--out", help="prefix for per-criterion JSON results")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            only = args.only.split(",") if args.only else None
            verify.select(only)
            return cmd_verify(only, args.out)
        cfg = RunConfig(parse_curve(args.curve), args.N, args.floor, args.out, args.format, args.plot)
    except (UsageError, ValueError) as exc:
        print(f"npspec: usage error: {exc}", file=sys.stderr)
        return 2
    handler = {"spectrum": cmd_spectrum, "grauert": cmd_grauert, "decay": cmd_decay}[args.command]
    try:
        return handler(cfg)
    except (NPSpecError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"npspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
