"""Characterization machinery for sources with no exterior field.

Three equivalent certificates are computed and cross-checked:

* modal: the projections of the source's angular-mode radial profiles onto
  the oscillatory and imaginary-argument radial wave families all vanish;
* spectral: the source's Fourier data on the sphere of radius kappa and its
  exponential-weight transform on the same sphere both vanish;
* field: the radiated field itself vanishes outside the support ball.

The spectral data can also be recovered purely from boundary measurements:
the functionals assembled in u_hat_from_trace / v_check_from_trace equal the
two transforms on the radius-kappa sphere, which is exactly why boundary
data at one frequency cannot determine more of the source than that sphere.

Callers pass unit directions only; the evaluation radius is snapped to
exactly kappa internally, so off-sphere queries are unrepresentable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from . import fields, specfun
from .context import WaveContext
from .kernels import green_biharmonic
from .quadrature import angular_rule, product_grid
from .sources import (
    ModalCoefficients,
    SourceField,
    default_mode_truncation,
    modal_coefficients,
)

__all__ = [
    "InconsistencyError",
    "ModalCoefficients",
    "NonradiatingVerdict",
    "SpectralConfig",
    "SpectralSample",
    "VerdictConfig",
    "direction_grid",
    "fourier_on_circle",
    "fourier_transform_quadrature",
    "laplace_on_circle",
    "laplace_transform_quadrature",
    "modal_coefficients",
    "nullspace_residual",
    "sample_spectrum",
    "u_hat_from_trace",
    "v_check_from_trace",
    "verdict",
]

# exp(kappa * R) weights overflow doubles beyond this.
_EXP_WEIGHT_LIMIT = 700.0


class InconsistencyError(RuntimeError):
    """The equivalent certificates disagree; numerics, not mathematics.

    Usually the truncation is too low for the source's angular content or
    the quadrature orders too coarse; raise them and re-run.
    """


@dataclass(frozen=True)
class SpectralSample:
    """Transform values of a source at one unit direction on the kappa sphere."""

    direction: np.ndarray
    f_hat: complex
    f_check: complex


@dataclass(frozen=True)
class SpectralConfig:
    """Sampling configuration for the exponential-weight transform domain.

    The transform is defined for frequency magnitudes up to s_max > kappa,
    but every identity used here lives on |s| = kappa exactly, so s_max is
    recorded for documentation and validation only.
    """

    s_max: float
    direction_count: int = 64

    def validate(self, ctx: WaveContext) -> None:
        if not self.s_max > ctx.kappa:
            raise ValueError(f"s_max must exceed kappa = {ctx.kappa}, got {self.s_max}")


@dataclass(frozen=True)
class VerdictConfig:
    """Knobs for the certification pipeline (all have working defaults)."""

    tolerance: float = 1e-6
    truncation: int | None = None
    direction_count: int = 16
    probe_factors: tuple = (1.05, 1.5, 3.0)
    radial_order: int | None = None
    angular_count: int | None = None
    stability_margin: int = 8


@dataclass(frozen=True)
class NonradiatingVerdict:
    """Aggregated certificate with one residual per characterization route.

    residual_modal: max over modes of (|alpha| + |beta|) / norm_f.
    residual_spectral: max over directions of (|f_hat| + |f_check|) / norm_f.
    residual_field: max exterior |u| over the probe set divided by
    field_scale, a Cauchy-Schwarz bound norm_f * sqrt(|B_R|) * max|kernel|
    on the field magnitude the source's mass could produce.
    """

    residual_modal: float
    residual_spectral: float
    residual_field: float
    tolerance: float
    is_nonradiating: bool
    truncation: int
    norm_f: float
    field_scale: float

    def to_dict(self) -> dict:
        return {
            "residual_modal": self.residual_modal,
            "residual_spectral": self.residual_spectral,
            "residual_field": self.residual_field,
            "N": self.truncation,
            "tolerance": self.tolerance,
            "is_nonradiating": self.is_nonradiating,
        }


# ---------------------------------------------------------------------------
# Direction grids
# ---------------------------------------------------------------------------
def direction_grid(ctx: WaveContext, count: int):
    """Unit directions for sampling the kappa sphere.

    2D: count equispaced angles.  3D: the product rule closest to count
    nodes (polar Gauss x equispaced azimuth), at least count in total.
    Returns (directions, params) as in AngularRule.
    """
    if ctx.dimension == 2:
        rule = angular_rule(ctx, max(count, 4))
        return rule.directions, rule.params
    polar = max(2, int(np.ceil(np.sqrt(count / 2.0))))
    rule = angular_rule(ctx, polar)
    return rule.directions, rule.params


def _as_coefficients(ctx, src, truncation, radial_order, angular_count) -> ModalCoefficients:
    if isinstance(src, ModalCoefficients):
        return src
    if truncation is None:
        truncation = default_mode_truncation(ctx)
    return modal_coefficients(ctx, src, truncation, radial_order, angular_count)


def _check_directions(ctx, directions) -> np.ndarray:
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    if dirs.shape[1] != ctx.dimension:
        raise ValueError(f"directions must have {ctx.dimension} components")
    if not np.allclose(np.linalg.norm(dirs, axis=-1), 1.0, atol=1e-12):
        raise ValueError("directions must be unit vectors")
    return dirs


def _harmonic_matrix(truncation, theta, phi) -> np.ndarray:
    return specfun.sph_harmonic_block(truncation, theta, phi)


def _direction_params(ctx, dirs):
    if ctx.dimension == 2:
        return np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), 2 * np.pi), None
    theta = np.arccos(np.clip(dirs[:, 2], -1.0, 1.0))
    phi = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), 2 * np.pi)
    return theta, phi


# ---------------------------------------------------------------------------
# Restricted transforms (modal synthesis)
# ---------------------------------------------------------------------------
def fourier_on_circle(
    ctx: WaveContext,
    src,
    directions,
    truncation: int | None = None,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> np.ndarray:
    """Fourier data of the source at frequency kappa * direction, synthesized
    from the modal coefficients.

    2D: 2 pi sum_n (-i)^n alpha_n exp(i n arg(dir));
    3D: 4 pi sum_(n, m) (-i)^n alpha_n^m Y_n^m(dir).
    """
    dirs = _check_directions(ctx, directions)
    coeffs = _as_coefficients(ctx, src, truncation, radial_order, angular_count)
    theta, phi = _direction_params(ctx, dirs)
    N = coeffs.truncation
    if ctx.dimension == 2:
        orders = np.arange(-N, N + 1)
        phases = np.exp(1j * np.outer(theta, orders))
        signs = np.array([(-1j) ** (n % 4) for n in orders])
        return 2.0 * np.pi * phases @ (signs * coeffs.alpha)
    harm = _harmonic_matrix(N, theta, phi)
    signs = np.concatenate([np.full(2 * n + 1, (-1j) ** (n % 4)) for n in range(N + 1)])
    return 4.0 * np.pi * harm @ (signs * coeffs.alpha)


def laplace_on_circle(
    ctx: WaveContext,
    src,
    directions,
    truncation: int | None = None,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> np.ndarray:
    """Exponential-weight transform of the source at s = kappa * direction,
    synthesized from the modal coefficients.

    2D: 2 pi sum_n i^n beta_n exp(i n arg(dir));
    3D: 4 pi sum_(n, m) i^n beta_n^m Y_n^m(dir).
    """
    if ctx.kappa * ctx.radius > _EXP_WEIGHT_LIMIT:
        raise OverflowError(
            f"exponential weights exp(kappa R) overflow for kappa*R = {ctx.kappa * ctx.radius:.3g}"
        )
    dirs = _check_directions(ctx, directions)
    coeffs = _as_coefficients(ctx, src, truncation, radial_order, angular_count)
    theta, phi = _direction_params(ctx, dirs)
    N = coeffs.truncation
    if ctx.dimension == 2:
        orders = np.arange(-N, N + 1)
        phases = np.exp(1j * np.outer(theta, orders))
        signs = np.array([1j ** (n % 4) for n in orders])
        return 2.0 * np.pi * phases @ (signs * coeffs.beta)
    harm = _harmonic_matrix(N, theta, phi)
    signs = np.concatenate([np.full(2 * n + 1, 1j ** (n % 4)) for n in range(N + 1)])
    return 4.0 * np.pi * harm @ (signs * coeffs.beta)


def fourier_transform_quadrature(
    ctx: WaveContext,
    src: SourceField,
    directions,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> np.ndarray:
    """Fourier data at kappa * direction by direct volume quadrature (the
    independent route against which the modal synthesis is checked)."""
    dirs = _check_directions(ctx, directions)
    grid = product_grid(ctx, src.resolve_radial_order(radial_order), angular_count)
    fw = src.values_on(grid) * grid.weights
    return np.exp(-1j * ctx.kappa * dirs @ grid.points.T) @ fw


def laplace_transform_quadrature(
    ctx: WaveContext,
    src: SourceField,
    directions,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> np.ndarray:
    """Exponential-weight transform at kappa * direction by direct quadrature."""
    if ctx.kappa * ctx.radius > _EXP_WEIGHT_LIMIT:
        raise OverflowError(
            f"exponential weights exp(kappa R) overflow for kappa*R = {ctx.kappa * ctx.radius:.3g}"
        )
    dirs = _check_directions(ctx, directions)
    grid = product_grid(ctx, src.resolve_radial_order(radial_order), angular_count)
    fw = src.values_on(grid) * grid.weights
    return np.exp(-ctx.kappa * dirs @ grid.points.T) @ fw


def sample_spectrum(ctx, src, directions, **kwargs) -> list[SpectralSample]:
    """Both transforms per direction, bundled."""
    dirs = _check_directions(ctx, directions)
    fh = fourier_on_circle(ctx, src, dirs, **kwargs)
    fc = laplace_on_circle(ctx, src, dirs, **kwargs)
    return [
        SpectralSample(direction=dirs[i], f_hat=complex(fh[i]), f_check=complex(fc[i]))
        for i in range(dirs.shape[0])
    ]


# ---------------------------------------------------------------------------
# Near-field functionals (boundary data only)
# ---------------------------------------------------------------------------
def u_hat_from_trace(ctx: WaveContext, trace: fields.BoundaryTrace, directions) -> np.ndarray:
    """Fourier data on the kappa sphere recovered from the four boundary
    channels alone; equals the source's Fourier data there.

    The 2D and 3D integrands are assembled exactly as their separate
    derivations group the signs; at |xi| = kappa the two groupings agree.
    """
    dirs = _check_directions(ctx, directions)
    g = trace.grid
    k2 = ctx.kappa**2
    xi = ctx.kappa * dirs  # (M, d)
    phase = np.exp(-1j * xi @ g.points.T)  # (M, nodes)
    xi_nu = 1j * (xi @ g.normals.T)  # (M, nodes)
    if ctx.dimension == 2:
        integrand = (
            -xi_nu * trace.lap_u[None, :]
            - trace.dlap_u_dnu[None, :]
            + k2 * trace.du_dnu[None, :]
            + k2 * xi_nu * trace.u[None, :]
        )
        return (integrand * phase) @ g.weights
    integrand = (
        trace.dlap_u_dnu[None, :]
        - k2 * trace.du_dnu[None, :]
        + xi_nu * trace.lap_u[None, :]
        - k2 * xi_nu * trace.u[None, :]
    )
    return -(integrand * phase) @ g.weights


def v_check_from_trace(ctx: WaveContext, trace: fields.BoundaryTrace, directions) -> np.ndarray:
    """Exponential-weight transform on the kappa sphere recovered from the
    boundary channels alone; equals the source's transform there."""
    if ctx.kappa * ctx.radius > _EXP_WEIGHT_LIMIT:
        raise OverflowError(
            f"exponential weights exp(kappa R) overflow for kappa*R = {ctx.kappa * ctx.radius:.3g}"
        )
    dirs = _check_directions(ctx, directions)
    g = trace.grid
    k2 = ctx.kappa**2
    s = ctx.kappa * dirs
    weight = np.exp(-s @ g.points.T)
    s_nu = s @ g.normals.T
    integrand = (
        trace.dlap_u_dnu[None, :]
        + k2 * trace.du_dnu[None, :]
        + s_nu * trace.lap_u[None, :]
        + k2 * s_nu * trace.u[None, :]
    )
    return -(integrand * weight) @ g.weights


# ---------------------------------------------------------------------------
# Null-space residual and verdict
# ---------------------------------------------------------------------------
def nullspace_residual(
    ctx: WaveContext,
    src: SourceField,
    probe_radii,
    truncation: int | None = None,
    direction_count: int = 16,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> float:
    """Max over exterior probes of the two annihilation integrals that define
    the invisible class: the regular-wave kernel integral and the decaying
    kernel integral, both evaluated through the mode expansions.

    Zero (below tolerance) exactly for sources with no exterior field.
    """
    radii = np.atleast_1d(np.asarray(probe_radii, dtype=float))
    if np.any(radii <= ctx.radius):
        raise ValueError(f"probe radii must exceed R = {ctx.radius}")
    coeffs = _as_coefficients(ctx, src, truncation, radial_order, angular_count)
    dirs, params = direction_grid(ctx, direction_count)
    N = coeffs.truncation
    worst = 0.0
    for r in radii:
        t = ctx.kappa * r
        if ctx.dimension == 2:
            theta = params
            orders = np.arange(-N, N + 1)
            phases = np.exp(1j * np.outer(theta, orders))
            jn = np.array([_sp.jv(n, t) for n in orders])
            reg = 2.0 * np.pi * phases @ (jn * coeffs.alpha)
            _, f_m, _, _ = fields._modal_series_2d(
                ctx, coeffs, np.full(theta.size, r), theta
            )
        else:
            theta, phi = params[:, 0], params[:, 1]
            harm = _harmonic_matrix(N, theta, phi)
            jn = np.concatenate(
                [np.full(2 * n + 1, _sp.spherical_jn(n, t)) for n in range(N + 1)]
            )
            reg = 4.0 * np.pi * harm @ (jn * coeffs.alpha)
            _, f_m, _, _ = fields._modal_series_3d(
                ctx, coeffs, np.full(theta.size, r), theta, phi
            )
        # the decaying-kernel integral is minus the modified radiation part
        worst = max(worst, float(np.max(np.abs(reg) + np.abs(f_m))))
    return worst


def _field_scale(ctx, norm_f, probe_radii) -> float:
    """Cauchy-Schwarz bound on the field magnitude the source could radiate."""
    if norm_f == 0.0:
        return 0.0
    dmin = max(float(np.min(probe_radii)) - ctx.radius, 1e-3 * ctx.radius)
    dmax = float(np.max(probe_radii)) + ctx.radius
    r = np.linspace(dmin, dmax, 512)
    zeros = np.zeros_like(r)
    x = np.column_stack([r] + [zeros] * (ctx.dimension - 1))
    y = np.zeros((1, ctx.dimension))
    gmax = float(np.max(np.abs(green_biharmonic(ctx, x, y))))
    return norm_f * np.sqrt(ctx.ball_volume) * gmax


def _residuals(ctx, src, truncation, config) -> tuple[float, float, ModalCoefficients]:
    coeffs = modal_coefficients(
        ctx, src, truncation, config.radial_order, config.angular_count
    )
    dirs, _ = direction_grid(ctx, config.direction_count)
    fh = fourier_on_circle(ctx, coeffs, dirs)
    fc = laplace_on_circle(ctx, coeffs, dirs)
    norm = coeffs.norm_f
    spectral = float(np.max(np.abs(fh) + np.abs(fc))) / norm if norm > 0 else 0.0
    return coeffs.max_residual(), spectral, coeffs


def verdict(ctx: WaveContext, src: SourceField, config: VerdictConfig | None = None) -> NonradiatingVerdict:
    """Certify whether a source radiates, by all three routes at once.

    The modal residual is computed at the working truncation and re-checked
    at a larger one (truncation stability); the exterior field is probed by
    direct quadrature at several radii.  The three routes must agree on
    which side of the tolerance they fall; disagreement raises
    InconsistencyError instead of guessing.
    """
    cfg = config or VerdictConfig()
    N = cfg.truncation if cfg.truncation is not None else default_mode_truncation(ctx)

    res_modal_low, _, _ = _residuals(ctx, src, N, cfg)
    res_modal, res_spectral, coeffs = _residuals(ctx, src, N + cfg.stability_margin, cfg)
    if (res_modal_low <= cfg.tolerance) != (res_modal <= cfg.tolerance):
        raise InconsistencyError(
            f"modal residual flips across the tolerance between truncations "
            f"{N} and {N + cfg.stability_margin} ({res_modal_low:.3e} vs {res_modal:.3e}); "
            "raise the truncation"
        )

    probe_radii = np.array(cfg.probe_factors) * ctx.radius
    dirs, _ = direction_grid(ctx, cfg.direction_count)
    pts = np.vstack([r * dirs for r in probe_radii])
    norm_f = coeffs.norm_f
    scale = _field_scale(ctx, norm_f, probe_radii)
    if norm_f > 0:
        u, _, _ = fields.eval_field_batch(
            ctx, src, pts, method="quadrature",
            radial_order=cfg.radial_order, angular_count=cfg.angular_count,
        )
        res_field = float(np.max(np.abs(u))) / scale
    else:
        res_field = 0.0

    flags = [res_modal <= cfg.tolerance, res_spectral <= cfg.tolerance, res_field <= cfg.tolerance]
    if len(set(flags)) != 1:
        raise InconsistencyError(
            "characterization routes disagree at tolerance "
            f"{cfg.tolerance:g}: modal {res_modal:.3e}, spectral {res_spectral:.3e}, "
            f"field {res_field:.3e}; raise the truncation or quadrature orders "
            "(or the source straddles the tolerance)"
        )
    return NonradiatingVerdict(
        residual_modal=res_modal,
        residual_spectral=res_spectral,
        residual_field=res_field,
        tolerance=cfg.tolerance,
        is_nonradiating=all(flags),
        truncation=N + cfg.stability_margin,
        norm_f=norm_f,
        field_scale=scale,
    )
