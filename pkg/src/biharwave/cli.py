"""Scenario runner: build sources from config files, certify them, and emit
traces, spectra, field tables, and the invisibility demonstration.

All outputs are machine-readable (CSV with '#' metadata lines, or JSON) and
deterministic: the same resolved configuration produces byte-identical
files, and every file embeds the configuration hash and library version.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__, fields, spectral
from .quadrature import boundary_grid
from .sources import source_from_config
from .spectral import InconsistencyError, VerdictConfig

_SCENARIO_KEYS = {
    "dimension", "R", "kappa", "root_index", "kind", "parameters",
    "truncation", "tolerance", "resolution", "directions",
}
_SOURCE_KEYS = {"dimension", "R", "kappa", "root_index", "kind", "parameters"}


class ConfigError(ValueError):
    pass


def _load_scenario(path: str, overrides: dict) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path!r} must contain a JSON object")
    unknown = set(cfg) - _SCENARIO_KEYS
    if unknown:
        raise ConfigError(f"unknown config key {sorted(unknown)[0]!r} in {path!r}")
    for key, value in overrides.items():
        if value is not None:
            cfg[key] = value
    return cfg


def _config_hash(cfg: dict) -> str:
    return hashlib.sha256(
        json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


def _build(cfg: dict):
    src_cfg = {k: v for k, v in cfg.items() if k in _SOURCE_KEYS}
    try:
        ctx, src = source_from_config(src_cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return ctx, src


def _meta(cfg: dict) -> dict:
    return {"biharwave_version": __version__, "config_sha256": _config_hash(cfg)}


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _open_out(path: str | None):
    return sys.stdout if path is None else open(path, "w", encoding="utf-8", newline="")


def _write_rows(fh, meta: dict, header: list[str], rows) -> None:
    for key in sorted(meta):
        fh.write(f"# {key}={meta[key]}\n")
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in row) + "\n")


def _verdict_config(cfg: dict) -> VerdictConfig:
    kwargs = {}
    if cfg.get("truncation") is not None:
        kwargs["truncation"] = int(cfg["truncation"])
    if cfg.get("tolerance") is not None:
        kwargs["tolerance"] = float(cfg["tolerance"])
    if cfg.get("directions") is not None:
        kwargs["direction_count"] = int(cfg["directions"])
    return VerdictConfig(**kwargs)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------
def cmd_verdict(args) -> int:
    cfg = _load_scenario(args.config, _common_overrides(args))
    ctx, src = _build(cfg)
    try:
        result = spectral.verdict(ctx, src, _verdict_config(cfg))
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 2
    payload = result.to_dict()
    payload.update(_meta(cfg))
    _write_json(args.out, payload)
    return 0


def cmd_trace(args) -> int:
    cfg = _load_scenario(args.config, _common_overrides(args))
    ctx, src = _build(cfg)
    grid = boundary_grid(ctx, cfg.get("resolution"))
    trace = fields.boundary_trace(ctx, src, grid, truncation=cfg.get("truncation"))
    fh = _open_out(args.out)
    try:
        fields.write_trace_csv(trace, fh, _meta(cfg))
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_spectral(args) -> int:
    cfg = _load_scenario(args.config, _common_overrides(args))
    ctx, src = _build(cfg)
    count = int(cfg.get("directions") or 64)
    dirs, params = spectral.direction_grid(ctx, count)
    trunc = cfg.get("truncation")
    fhat = spectral.fourier_on_circle(ctx, src, dirs, truncation=trunc)
    fcheck = spectral.laplace_on_circle(ctx, src, dirs, truncation=trunc)
    grid = boundary_grid(ctx, cfg.get("resolution"))
    trace = fields.boundary_trace(ctx, src, grid, truncation=trunc)
    uhat = spectral.u_hat_from_trace(ctx, trace, dirs)
    vcheck = spectral.v_check_from_trace(ctx, trace, dirs)

    header = ["dir_angle"] + (["dir_polar"] if ctx.dimension == 3 else [])
    header += [
        "fhat_re", "fhat_im", "fcheck_re", "fcheck_im",
        "uhat_re", "uhat_im", "vcheck_re", "vcheck_im",
        "fhat_minus_uhat_abs",
    ]
    rows = []
    for i in range(dirs.shape[0]):
        if ctx.dimension == 2:
            angles = [float(params[i])]
        else:
            angles = [float(params[i, 1]), float(params[i, 0])]  # azimuth, polar
        rows.append(angles + [
            fhat[i].real, fhat[i].imag, fcheck[i].real, fcheck[i].imag,
            uhat[i].real, uhat[i].imag, vcheck[i].real, vcheck[i].imag,
            abs(fhat[i] - uhat[i]),
        ])
    fh = _open_out(args.out)
    try:
        _write_rows(fh, _meta(cfg), header, rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_nonuniqueness(args) -> int:
    cfg_f = _load_scenario(args.config, _common_overrides(args))
    cfg_g = _load_scenario(args.config_g, {})
    ctx, src_f = _build(cfg_f)
    ctx_g, src_g = _build(cfg_g)
    if (ctx_g.dimension, ctx_g.kappa, ctx_g.radius) != (ctx.dimension, ctx.kappa, ctx.radius):
        raise ConfigError("the two configs must share dimension, kappa, and R")
    try:
        verdict_g = spectral.verdict(ctx, src_g, _verdict_config(cfg_f))
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 2
    if not verdict_g.is_nonradiating:
        print(
            "the perturbation source radiates "
            f"(modal residual {verdict_g.residual_modal:.3e}); nothing to demonstrate",
            file=sys.stderr,
        )
        return 1
    grid = boundary_grid(ctx, cfg_f.get("resolution"))
    trunc = cfg_f.get("truncation")
    trace_f = fields.boundary_trace(ctx, src_f, grid, truncation=trunc)
    trace_fg = fields.boundary_trace(ctx, src_f + src_g, grid, truncation=trunc)
    discrepancy = float(np.max(np.abs(trace_f.stacked() - trace_fg.stacked())))
    payload = {
        "max_trace_discrepancy": discrepancy,
        "norm_f": src_f.l2_norm(),
        "norm_g": src_g.l2_norm(),
        "verdict_g": verdict_g.to_dict(),
    }
    payload.update(_meta({"f": cfg_f, "g": cfg_g}))
    _write_json(args.out, payload)
    return 0


def cmd_field(args) -> int:
    cfg = _load_scenario(args.config, _common_overrides(args))
    ctx, src = _build(cfg)
    factors = [float(v) for v in args.radii.split(",")] if args.radii else [1.05, 1.5, 3.0]
    count = int(cfg.get("directions") or 16)
    dirs, params = spectral.direction_grid(ctx, count)
    header = ["radius", "dir_angle"] + (["dir_polar"] if ctx.dimension == 3 else [])
    header += ["u_re", "u_im", "fh_re", "fh_im", "fm_re", "fm_im"]
    rows = []
    for factor in factors:
        pts = factor * ctx.radius * dirs
        u, f_h, f_m = fields.eval_field_batch(ctx, src, pts, method="quadrature")
        for i in range(dirs.shape[0]):
            if ctx.dimension == 2:
                angles = [float(params[i])]
            else:
                angles = [float(params[i, 1]), float(params[i, 0])]
            rows.append([factor * ctx.radius] + angles + [
                u[i].real, u[i].imag, f_h[i].real, f_h[i].imag, f_m[i].real, f_m[i].imag,
            ])
    fh = _open_out(args.out)
    try:
        _write_rows(fh, _meta(cfg), header, rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------
def _common_overrides(args) -> dict:
    return {
        "truncation": getattr(args, "truncation", None),
        "tolerance": getattr(args, "tolerance", None),
        "resolution": getattr(args, "resolution", None),
        "dimension": getattr(args, "dimension", None),
        "directions": getattr(args, "directions", None),
    }


def _add_common(p, with_g=False):
    p.add_argument("--config", required=True, help="scenario JSON path")
    if with_g:
        p.add_argument("--config-g", required=True, help="perturbation scenario JSON path")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--directions", type=int, default=None)
    p.add_argument("--dimension", type=int, choices=(2, 3), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biharwave",
        description="Field evaluation and nonradiating-source certification "
        "for the fourth-order wave equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verdict", help="certify a source and write a JSON report")
    _add_common(p)
    p.set_defaults(func=cmd_verdict)

    p = sub.add_parser("trace", help="boundary measurement channels as CSV")
    _add_common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("spectral", help="transform and boundary-functional samples as CSV")
    _add_common(p)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("nonuniqueness", help="show an invisible source perturbation")
    _add_common(p, with_g=True)
    p.set_defaults(func=cmd_nonuniqueness)

    p = sub.add_parser("field", help="exterior field samples as CSV")
    _add_common(p)
    p.add_argument("--radii", default=None, help="comma-separated radius factors (times R)")
    p.set_defaults(func=cmd_field)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except InconsistencyError as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
