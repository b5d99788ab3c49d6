"""Forward solver: exterior wave fields, boundary traces, far-field patterns.

The radiated field of a source f splits into two radiation solutions,

    u = (f_h - f_m) / (2 kappa**2),

where f_h solves the Helmholtz equation driven by f and f_m the modified
Helmholtz equation.  Two independent evaluation routes are provided:

* direct quadrature of the kernels against the source (any source kind,
  points strictly outside the support), and
* angular-mode series built from the modal coefficients (valid from the
  support radius outward), which is also how boundary traces are computed:
  the trace derivatives come from analytic recurrences, not numerical
  differentiation, because the near-field identities downstream need them
  at the 1e-8 level.

Outside the support, f_h and f_m solve the homogeneous equations, so the
Laplacian trace needs no new series: lap u = -(f_h + f_m) / 2.

Exponentially decaying modal terms are evaluated in scaled form (factor
exp(kappa r) removed and reapplied at combination time) so that large-radius
evaluation underflows cleanly to zero instead of producing NaNs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from . import specfun
from .context import WaveContext
from .quadrature import BoundaryGrid, product_grid
from .sources import (
    ModalCoefficients,
    SourceField,
    SupportViolationError,
    default_mode_truncation,
    modal_coefficients,
)

# Points per chunk in the direct-quadrature evaluator (memory control).
_EVAL_CHUNK = 32


@dataclass(frozen=True)
class FieldSample:
    """Field values at one point: total field and its two radiation parts."""

    point: np.ndarray
    u: complex
    f_h: complex
    f_m: complex


@dataclass(frozen=True)
class BoundaryTrace:
    """The four measurement channels on the boundary sphere."""

    grid: BoundaryGrid
    u: np.ndarray
    du_dnu: np.ndarray
    lap_u: np.ndarray
    dlap_u_dnu: np.ndarray

    def stacked(self) -> np.ndarray:
        """All four channels as a (4, M) array (fixed channel order)."""
        return np.vstack([self.u, self.du_dnu, self.lap_u, self.dlap_u_dnu])


@dataclass(frozen=True)
class FarFieldSample:
    direction: np.ndarray
    u_inf: complex


# ---------------------------------------------------------------------------
# Direct quadrature route
# ---------------------------------------------------------------------------
def _eval_quadrature(ctx, src, pts, radial_order, angular_count):
    grid = product_grid(ctx, radial_order, angular_count)
    fw = src.values_on(grid) * grid.weights
    k = ctx.kappa
    f_h = np.zeros(pts.shape[0], dtype=complex)
    f_m = np.zeros(pts.shape[0], dtype=complex)
    for start in range(0, pts.shape[0], _EVAL_CHUNK):
        chunk = pts[start : start + _EVAL_CHUNK]
        diff = chunk[:, None, :] - grid.points[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        if ctx.dimension == 2:
            phi_h = 0.25j * _sp.hankel1(0, k * dist)
            phi_m = _sp.kv(0, k * dist) / (2.0 * np.pi)
        else:
            phi_h = np.exp(1j * k * dist) / (4.0 * np.pi * dist)
            phi_m = np.exp(-k * dist) / (4.0 * np.pi * dist)
        f_h[start : start + _EVAL_CHUNK] = -phi_h @ fw
        f_m[start : start + _EVAL_CHUNK] = -phi_m @ fw
    return f_h, f_m


# ---------------------------------------------------------------------------
# Modal series route
# ---------------------------------------------------------------------------
def _coeff_for(ctx, src, truncation, radial_order, angular_count) -> ModalCoefficients:
    if truncation is None:
        truncation = default_mode_truncation(ctx)
    return modal_coefficients(ctx, src, truncation, radial_order, angular_count)


def _modal_series_2d(ctx, coeffs, r, theta, want_derivative=False):
    """f_h, f_m (and radial derivatives) from the order series at (r, theta)."""
    k = ctx.kappa
    N = coeffs.truncation
    t = k * r
    orders = np.arange(-N, N + 1)
    phases = np.exp(1j * np.outer(theta, orders))  # (M, 2N+1)

    h = np.empty((r.size, 2 * N + 1), dtype=complex)
    s = np.empty_like(h)
    for n in range(-N, N + 1):
        h[:, n + N] = _sp.hankel1(n, t)
        s[:, n + N] = specfun.hankel1_imag_scaled(n, t)
    damp = np.exp(-t)
    f_h = -0.5j * np.pi * (phases * h) @ coeffs.alpha
    f_m = -0.5j * np.pi * damp * ((phases * s) @ coeffs.beta)
    if not want_derivative:
        return f_h, f_m, None, None

    dh = np.empty_like(h)
    ds = np.empty_like(h)
    for n in range(-N, N + 1):
        dh[:, n + N] = _sp.h1vp(n, t)
        ds[:, n + N] = specfun.hankel1_imag_scaled_dt(n, t)
    df_h = -0.5j * np.pi * k * (phases * dh) @ coeffs.alpha
    df_m = -0.5j * np.pi * k * damp * ((phases * ds) @ coeffs.beta)
    return f_h, f_m, df_h, df_m


def _modal_series_3d(ctx, coeffs, r, theta, phi, want_derivative=False):
    """g_h, g_m (and radial derivatives) from the degree/order series."""
    k = ctx.kappa
    N = coeffs.truncation
    t = k * r

    harm = specfun.sph_harmonic_block(N, theta, phi)

    h = np.empty_like(harm)
    s = np.empty_like(harm)
    col = 0
    for n in range(N + 1):
        hn = _sp.spherical_jn(n, t) + 1j * _sp.spherical_yn(n, t)
        sn = specfun.sph_hankel1_imag_scaled(n, t)
        for m in range(-n, n + 1):
            h[:, col] = hn
            s[:, col] = sn
            col += 1
    damp = np.exp(-t)
    f_h = -1j * k * (harm * h) @ coeffs.alpha
    f_m = k * damp * ((harm * s) @ coeffs.beta)
    if not want_derivative:
        return f_h, f_m, None, None

    dh = np.empty_like(harm)
    ds = np.empty_like(harm)
    col = 0
    for n in range(N + 1):
        dhn = k * (_sp.spherical_jn(n, t, derivative=True) + 1j * _sp.spherical_yn(n, t, derivative=True))
        dsn = k * specfun.sph_hankel1_imag_scaled_dt(n, t)
        for m in range(-n, n + 1):
            dh[:, col] = dhn
            ds[:, col] = dsn
            col += 1
    df_h = -1j * k * (harm * dh) @ coeffs.alpha
    df_m = k * damp * ((harm * ds) @ coeffs.beta)
    return f_h, f_m, df_h, df_m


def _spherical_params(pts):
    r = np.linalg.norm(pts, axis=-1)
    if pts.shape[1] == 2:
        theta = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * np.pi)
        return r, theta, None
    ct = np.divide(pts[:, 2], r, out=np.zeros_like(r), where=r > 0)
    theta = np.arccos(np.clip(ct, -1.0, 1.0))
    phi = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * np.pi)
    return r, theta, phi


def _eval_modal(ctx, src, pts, truncation, radial_order, angular_count):
    coeffs = _coeff_for(ctx, src, truncation, radial_order, angular_count)
    r, theta, phi = _spherical_params(pts)
    if ctx.dimension == 2:
        f_h, f_m, _, _ = _modal_series_2d(ctx, coeffs, r, theta)
    else:
        f_h, f_m, _, _ = _modal_series_3d(ctx, coeffs, r, theta, phi)
    return f_h, f_m


# ---------------------------------------------------------------------------
# Public surface
# ---------------------------------------------------------------------------
def eval_field_batch(
    ctx: WaveContext,
    src: SourceField,
    points,
    method: str = "auto",
    truncation: int | None = None,
    radial_order: int | None = None,
    angular_count: int | None = None,
):
    """Evaluate (u, f_h, f_m) at exterior points, shape (M, d).

    method 'quadrature' integrates the kernels against the source and needs
    every point strictly outside the support radius; 'modal' sums the
    exterior angular-mode series (valid from the support radius outward);
    'auto' picks 'modal' for modal sources and 'quadrature' otherwise.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != ctx.dimension:
        raise ValueError(f"points must have {ctx.dimension} components")
    radial_order = src.resolve_radial_order(radial_order)
    r = np.linalg.norm(pts, axis=-1)
    if method == "auto":
        method = "modal" if src.kind == "modal" else "quadrature"
    if method == "quadrature":
        if np.any(r <= src.support_radius):
            raise ValueError(
                "quadrature evaluation needs |x| > support radius "
                f"({src.support_radius}); got min |x| = {r.min():.6g}"
            )
        f_h, f_m = _eval_quadrature(ctx, src, pts, radial_order, angular_count)
    elif method == "modal":
        if np.any(r < src.support_radius * (1.0 - 1e-12)):
            raise ValueError(
                "modal evaluation is valid from the support radius outward "
                f"({src.support_radius}); got min |x| = {r.min():.6g}"
            )
        f_h, f_m = _eval_modal(ctx, src, pts, truncation, radial_order, angular_count)
    else:
        raise ValueError(f"unknown method {method!r}")
    u = (f_h - f_m) / (2.0 * ctx.kappa**2)
    return u, f_h, f_m


def eval_field(ctx: WaveContext, src: SourceField, point, **kwargs) -> FieldSample:
    """FieldSample of u and its two radiation parts at a single exterior point."""
    pt = np.asarray(point, dtype=float).reshape(1, -1)
    u, f_h, f_m = eval_field_batch(ctx, src, pt, **kwargs)
    return FieldSample(point=pt[0], u=complex(u[0]), f_h=complex(f_h[0]), f_m=complex(f_m[0]))


def boundary_trace(
    ctx: WaveContext,
    src: SourceField,
    grid: BoundaryGrid,
    truncation: int | None = None,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> BoundaryTrace:
    """The four boundary channels (u, normal derivative, Laplacian, its
    normal derivative) on the measurement grid, from the exterior series.

    For sources supported strictly inside the ball all four channels are
    classical.  Full-support sources are evaluated as the exterior limit,
    which is exact whenever the exterior field extends smoothly to the
    boundary (in particular for every certified nonradiating source).
    """
    if src.support_radius > ctx.radius * (1 + 1e-12):
        raise SupportViolationError(
            f"source support {src.support_radius} exceeds the context ball R = {ctx.radius}"
        )
    coeffs = _coeff_for(ctx, src, truncation, src.resolve_radial_order(radial_order), angular_count)
    r = np.full(grid.count, ctx.radius)
    if ctx.dimension == 2:
        theta = grid.params if grid.params.ndim == 1 else grid.params[:, 0]
        f_h, f_m, df_h, df_m = _modal_series_2d(ctx, coeffs, r, theta, want_derivative=True)
    else:
        theta, phi = grid.params[:, 0], grid.params[:, 1]
        f_h, f_m, df_h, df_m = _modal_series_3d(ctx, coeffs, r, theta, phi, want_derivative=True)
    scale = 1.0 / (2.0 * ctx.kappa**2)
    return BoundaryTrace(
        grid=grid,
        u=(f_h - f_m) * scale,
        du_dnu=(df_h - df_m) * scale,
        lap_u=-(f_h + f_m) / 2.0,
        dlap_u_dnu=-(df_h + df_m) / 2.0,
    )


def far_field(
    ctx: WaveContext,
    src: SourceField,
    directions,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> np.ndarray:
    """Far-field pattern at unit directions, shape (M, d): the source's
    Fourier data at spatial frequency kappa * direction.

    The large-radius field obeys
    u(x) ~ -(mu_d / (8 kappa^2)) exp(i kappa |x|) / (pi |x|)^((d-1)/2) * u_inf(xhat).
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    norms = np.linalg.norm(dirs, axis=-1)
    if not np.allclose(norms, 1.0, atol=1e-12):
        raise ValueError("directions must be unit vectors")
    grid = product_grid(ctx, src.resolve_radial_order(radial_order), angular_count)
    fw = src.values_on(grid) * grid.weights
    phases = np.exp(-1j * ctx.kappa * dirs @ grid.points.T)
    return phases @ fw


def far_field_sample(ctx: WaveContext, src: SourceField, direction, **kwargs) -> FarFieldSample:
    d = np.asarray(direction, dtype=float)
    return FarFieldSample(direction=d, u_inf=complex(far_field(ctx, src, d[None, :], **kwargs)[0]))


# ---------------------------------------------------------------------------
# Trace CSV
# ---------------------------------------------------------------------------
def write_trace_csv(trace: BoundaryTrace, fh, meta: dict | None = None) -> None:
    """Write a trace as CSV: parameter angles then re/im pairs per channel.

    meta entries become '#'-prefixed header lines (written sorted for
    reproducibility).
    """
    for key in sorted(meta or {}):
        fh.write(f"# {key}={meta[key]}\n")
    is_3d = trace.grid.params.ndim == 2
    header = ["theta"] + (["phi"] if is_3d else [])
    for name in ("u", "dnu_u", "lap_u", "dnu_lap_u"):
        header += [f"{name}_re", f"{name}_im"]
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for i in range(trace.grid.count):
        if is_3d:
            row = [repr(float(trace.grid.params[i, 0])), repr(float(trace.grid.params[i, 1]))]
        else:
            row = [repr(float(trace.grid.params[i]))]
        for arr in (trace.u, trace.du_dnu, trace.lap_u, trace.dlap_u_dnu):
            row += [repr(float(arr[i].real)), repr(float(arr[i].imag))]
        writer.writerow(row)
