"""Command-line front end.

Commands: beta, residues, gw, sweep, verify. Output is deterministic: fixed
quadrature orders, fixed seeds, 17-significant-digit decimals, so identical
configurations produce byte-identical files.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numeric failure (pole guard or reach violation).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import conformal, continuation as cont, oracles, residues as res, verify
from ._util import ENV_WORKERS, ConfigError, NumericError, fmt_float
from .manifold import shapes


def _parse_shape(arg: str) -> shapes.ManifoldSpec:
    if arg is None:
        raise ConfigError("--shape is required for this command")
    if arg.strip().startswith("{"):
        return shapes.from_config(json.loads(arg))
    if os.path.exists(arg):
        return shapes.load_config(arg)
    raise ConfigError(f"shape config not found: {arg}")


def _parse_zlist(arg: str) -> list[float]:
    try:
        return [float(tok) for tok in arg.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --z list {arg!r}: {exc}") from exc


def _parse_sweep(arg: str) -> np.ndarray:
    try:
        a0, a1, step = (float(t) for t in arg.split(":"))
    except ValueError as exc:
        raise ConfigError(f"bad --sweep range {arg!r}") from exc
    if step <= 0 or a1 < a0:
        raise ConfigError("sweep needs a0 <= a1 and step > 0")
    npts = int(round((a1 - a0) / step)) + 1
    return a0 + step * np.arange(npts)


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(rows: list[list], header: list[str]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_float(v) if isinstance(v, float) else str(v)
                              for v in row))
    return "\n".join(lines) + "\n"


def _report(pairs: list[tuple[str, object]]) -> str:
    return "".join(f"{k} {fmt_float(v) if isinstance(v, float) else v}\n"
                   for k, v in pairs)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_beta(args) -> int:
    spec = _parse_shape(args.shape)
    zs = _parse_zlist(args.z) if args.z else [2.0, 1.0, 0.0, -0.5]
    kw = {}
    if args.delta is not None:
        kw["delta"] = args.delta
    if args.fit_degree is not None:
        kw["fit_degree"] = args.fit_degree
    if args.order is not None:
        kw["order"] = args.order
    rows = []
    if spec.kind == "polygon_knot":
        for z in zs:
            be = cont.polygon_beta(spec.params["vertices"], z)
            rows.append(_beta_row(z, be))
    elif spec.is_body:
        prof = cont.body_profile(spec, **kw)
        for z in zs:
            rows.append(_beta_row(z, cont.body_beta(spec, z, profile=prof)))
    else:
        weight = cont.WeightKind(args.weight)
        prof = cont.distance_profile(spec, weight=weight, **kw)
        for z in zs:
            rows.append(_beta_row(z, cont.beta_eval(prof, z)))
    if args.format == "csv":
        _emit(_csv(rows, ["z", "re_value", "im_value", "method", "note"]), args.out)
    else:
        pairs = []
        for z, re_v, im_v, meth, note in rows:
            pairs.append((f"beta[{fmt_float(z)}]", re_v))
            pairs.append((f"method[{fmt_float(z)}]", f"{meth}{' ' + note if note else ''}"))
        _emit(_report(pairs), args.out)
    return 0


def _beta_row(z: float, be: cont.BetaEvaluation):
    if be.at_pole:
        # pole hit: report the residue in place of a value
        return [float(z), float(be.residue), 0.0, be.method,
                f"pole@{fmt_float(be.nearest_pole)};finite_part={fmt_float(be.finite_part.real)}"]
    return [float(z), float(be.value.real), float(be.value.imag), be.method, ""]


def cmd_residues(args) -> int:
    spec = _parse_shape(args.shape)
    order = args.order if args.order is not None else 32
    if spec.kind == "polygon_knot":
        r1, r2 = oracles.polygon_knot_residues(spec.params["vertices"])
        rep = res.ResidueReport(metadata={"kind": spec.kind})
        rep.add(-1.0, r1, "oracle", 0.0)
        rep.add(-2.0, r2, "oracle", 0.0)
    elif spec.is_body:
        rep = res.body_residues(spec, order=order)
        rel = res.relative_residues(spec, order=order)
        for pole, (v, meth, err) in rel.entries.items():
            rep.metadata[f"relative[{fmt_float(pole)}]"] = fmt_float(v)
    else:
        rep = res.ResidueReport(metadata={"kind": spec.kind, "m": spec.m})
        rep.add(-spec.m, res.residue_first(spec, order=order), "curvature")
        rep.add(-spec.m - 2, res.residue_second(spec, order=order), "curvature")
        if spec.m == 4 and spec.codim == 1:
            r8 = res.residue_m8(spec, order=max(order, 48))
            r8nu = res.nu_residue_m8(spec, order=max(order, 48))
            rep.add(-8.0, r8["modified"], "curvature-order3", r8["spread"])
            rep.metadata["r8_raw"] = fmt_float(r8["raw"])
            rep.metadata["r8_nu"] = fmt_float(r8nu["modified"])
            rep.metadata["r8_nu_raw"] = fmt_float(r8nu["raw"])
    _emit(rep.to_text(), args.out)
    return 0


def cmd_gw(args) -> int:
    spec = _parse_shape(args.shape)
    order = args.order if args.order is not None else 48
    eb = conformal.energy_breakdown(spec, order=order)
    _emit(_report(eb.rows()), args.out)
    return 0


def cmd_sweep(args) -> int:
    avals = _parse_sweep(args.sweep) if args.sweep else _parse_sweep("0.5:3.0:0.05")
    order = args.order if args.order is not None else 48
    rows = []
    for a in avals:
        a = float(a)
        sp = shapes.spheroid(a)
        gw = conformal.graham_witten(sp, order=order)
        r8 = res.residue_m8(sp, order=order)["modified"]
        r8nu = res.nu_residue_m8(sp, order=order)["modified"]
        rows.append([a, gw, r8, r8nu])
    _emit(_csv(rows, ["a", "gw", "r8", "r8_nu"]), args.out)
    return 0


def cmd_verify(args) -> int:
    results = verify.run_all()
    text = verify.render_report(results)
    _emit(text, args.out)
    if all(r.passed for r in results):
        return 0
    first = next(r for r in results if not r.passed)
    sys.stderr.write(f"first failing check: {first.name}\n")
    return 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="residue-lab",
        description="Meromorphic Riesz energies of embedded manifolds: "
                    "values, residues, and conformal curvature energies.")
    p.add_argument("--shape", help="path to a JSON shape config, or inline JSON")
    p.add_argument("--cmd", required=True,
                   choices=["beta", "residues", "gw", "sweep", "verify"])
    p.add_argument("--z", help="comma-separated evaluation points")
    p.add_argument("--sweep", help="spheroid parameter range a0:a1:step")
    p.add_argument("--weight", default="one",
                   choices=[w.value for w in cont.WeightKind if w.value != "custom"])
    p.add_argument("--order", type=int, help="quadrature order override")
    p.add_argument("--delta", type=float, help="small-t cutoff override")
    p.add_argument("--fit-degree", type=int, dest="fit_degree",
                   help="number of even model coefficients")
    p.add_argument("--tol", type=float, default=1e-6, help="reporting tolerance")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", default="csv", choices=["csv", "report"])
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get(ENV_WORKERS, "1")),
                   help="worker threads for pair accumulation")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses code 2 for usage errors already
        return int(exc.code or 0)
    if args.workers and args.workers > 0:
        os.environ[ENV_WORKERS] = str(args.workers)
    dispatch = {"beta": cmd_beta, "residues": cmd_residues, "gw": cmd_gw,
                "sweep": cmd_sweep, "verify": cmd_verify}
    try:
        return dispatch[args.cmd](args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except NumericError as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
