"""Compactly supported sources: representations, angular-mode projection,
modal coefficients, and the explicit nonradiating constructors.

A source is one of three kinds:

* ``callable`` -- a pointwise evaluator on the ball, masked to its support;
* ``modal``    -- per-angular-mode radial profiles tabulated on a radial rule
  (2D Fourier orders, 3D spherical-harmonic degree/order pairs);
* ``grid``     -- raw values on a quadrature product grid, consumed only by
  integration; no off-grid interpolation is offered.

The nonradiating constructors apply their radial differential operators
analytically (chain rule on powers of the order-zero radial waves), never by
numerical differentiation: the certification tests chase 1e-8-level zeros
that finite differences cannot reach.  A user-supplied bump falls back to
high-order finite differences with correspondingly reduced accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as _sp
from scipy.interpolate import BarycentricInterpolator

from . import specfun
from .context import WaveContext
from .quadrature import (
    DEFAULT_ANGULAR_COUNT_2D,
    DEFAULT_POLAR_COUNT_3D,
    DEFAULT_RADIAL_ORDER,
    ProductGrid,
    RadialRule,
    product_grid,
    radial_rule,
)

# Denominator magnitudes below this are treated as degenerate normalizations.
DEGENERATE_DENOMINATOR = 1e-12

# Fraction of the bump radius below which the Taylor branch evaluates the
# mollifier image (the closed-form branch divides by r, r**2, r**3).
_BUMP_TAYLOR_FRACTION = 1e-3

# The mollifier's fourth-order image has steep spikes near its support edge;
# this radial order resolves its projection integrals below 1e-8 relative.
_BUMP_RADIAL_ORDER = 320


class SupportViolationError(ValueError):
    """A source (or bump) support extends beyond where the operation allows."""


class DegenerateSourceError(ValueError):
    """A normalizing integral of a constructor is numerically zero."""


def _ipow(k: int) -> complex:
    return (1.0, 1j, -1.0, -1j)[k % 4]


def mode_count(dimension: int, truncation: int) -> int:
    """Number of stored angular modes up to the truncation."""
    return 2 * truncation + 1 if dimension == 2 else (truncation + 1) ** 2


def mode_index(dimension: int, n: int, m: int | None = None) -> int:
    """Flat index of an angular mode: 2D order n, or 3D degree/order (n, m)."""
    if dimension == 2:
        return n  # caller adds the truncation offset
    if m is None:
        raise ValueError("3D modes need both degree n and order m")
    if abs(m) > n:
        raise ValueError(f"|m| must be <= n, got (n, m) = ({n}, {m})")
    return n * n + n + m


@dataclass(frozen=True)
class ModalProfiles:
    """Angular-mode radial profiles tabulated on a radial rule.

    values[k, j] is profile k at radius nodes[j]; 2D rows are ordered
    n = -N..N (offset by N), 3D rows are packed by mode_index.
    """

    dimension: int
    truncation: int
    rule: RadialRule
    values: np.ndarray

    def profile(self, n: int, m: int | None = None) -> np.ndarray:
        if self.dimension == 2:
            if abs(n) > self.truncation:
                raise ValueError(f"|n| must be <= {self.truncation}, got {n}")
            return self.values[n + self.truncation]
        if n > self.truncation:
            raise ValueError(f"n must be <= {self.truncation}, got {n}")
        return self.values[mode_index(3, n, m)]

    def interpolator(self) -> BarycentricInterpolator:
        """Barycentric interpolant of all profiles over the rule nodes."""
        return BarycentricInterpolator(self.rule.nodes, self.values.T)


@dataclass(frozen=True)
class ModalCoefficients:
    """Projections of the mode profiles onto the two radial wave families.

    alpha pairs each profile with the oscillatory family J_n(kappa r)
    (spherical j_n in 3D); beta pairs it with the imaginary-argument family
    J_n(i kappa r) (spherical counterpart in 3D).  Simultaneous vanishing of
    every entry characterizes a source with no exterior field.  Layout of the
    arrays matches ModalProfiles.values rows.  norm_f is the quadrature
    L2 norm of the source over the ball.
    """

    dimension: int
    truncation: int
    alpha: np.ndarray
    beta: np.ndarray
    norm_f: float

    def get(self, n: int, m: int | None = None) -> tuple[complex, complex]:
        if self.dimension == 2:
            idx = n + self.truncation
        else:
            idx = mode_index(3, n, m)
        return complex(self.alpha[idx]), complex(self.beta[idx])

    def max_residual(self) -> float:
        """max over modes of (|alpha| + |beta|) / norm_f (zero source gives 0)."""
        peak = float(np.max(np.abs(self.alpha) + np.abs(self.beta)))
        if self.norm_f == 0.0:
            return 0.0
        return peak / self.norm_f


class SourceField:
    """A compactly supported source over the context ball.

    Construct through the classmethods; instances are immutable in use and
    safe to share.  evaluate() returns 0 outside the support radius.
    """

    def __init__(self, ctx, kind, support_radius, func=None, modal=None,
                 grid=None, grid_values=None, radial_profile=None, radial_hint=None):
        if support_radius <= 0 or support_radius > ctx.radius * (1 + 1e-12):
            raise SupportViolationError(
                f"support_radius must lie in (0, R], got {support_radius} with R = {ctx.radius}"
            )
        self.ctx = ctx
        self.kind = kind
        self.support_radius = float(min(support_radius, ctx.radius))
        self._func = func
        self.modal = modal
        self._grid = grid
        self._grid_values = grid_values
        self.radial_profile = radial_profile
        self.radial_hint = radial_hint
        self._norm_cache: float | None = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_callable(cls, ctx, func, support_radius=None, radial_profile=None, radial_hint=None):
        """Source from a pointwise evaluator mapping (M, d) points to M values."""
        if support_radius is None:
            support_radius = ctx.radius
        return cls(ctx, "callable", support_radius, func=func,
                   radial_profile=radial_profile, radial_hint=radial_hint)

    @classmethod
    def from_radial(cls, ctx, profile, support_radius=None):
        """Radially symmetric source from a profile r -> value."""

        def func(points):
            r = np.linalg.norm(np.atleast_2d(points), axis=-1)
            return np.asarray(profile(r), dtype=complex)

        return cls.from_callable(ctx, func, support_radius, radial_profile=profile)

    @classmethod
    def from_modes(cls, ctx, modes, support_radius=None, radial_order=DEFAULT_RADIAL_ORDER):
        """Modal source from {n: profile} (2D) or {(n, m): profile} (3D) callables."""
        rule = radial_rule(ctx, radial_order)
        if ctx.dimension == 2:
            trunc = max(abs(int(n)) for n in modes)
        else:
            trunc = max(int(n) for n, _ in modes)
        values = np.zeros((mode_count(ctx.dimension, trunc), rule.order), dtype=complex)
        for key, prof in modes.items():
            if ctx.dimension == 2:
                idx = int(key) + trunc
            else:
                idx = mode_index(3, int(key[0]), int(key[1]))
            values[idx] = np.asarray(prof(rule.nodes), dtype=complex)
        modal = ModalProfiles(ctx.dimension, trunc, rule, values)
        if support_radius is None:
            support_radius = ctx.radius
        return cls(ctx, "modal", support_radius, modal=modal)

    @classmethod
    def from_grid(cls, ctx, grid: ProductGrid, values, support_radius=None):
        """Source known only through its values on a quadrature product grid."""
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.points.shape[0],):
            raise ValueError("grid values must match grid points one to one")
        if support_radius is None:
            support_radius = ctx.radius
        return cls(ctx, "grid", support_radius, grid=grid, grid_values=values)

    @classmethod
    def zero(cls, ctx):
        return cls.from_callable(ctx, lambda pts: np.zeros(np.atleast_2d(pts).shape[0], dtype=complex))

    # -- evaluation ---------------------------------------------------------
    def evaluate(self, points) -> np.ndarray:
        """Pointwise values, masked to zero outside the support radius."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.linalg.norm(pts, axis=-1)
        if self.kind == "callable":
            vals = np.asarray(self._func(pts), dtype=complex)
        elif self.kind == "modal":
            vals = self._synthesize(pts, r)
        else:
            raise ValueError("grid sources store node values only; no off-grid evaluation")
        vals = np.where(r >= self.support_radius, 0.0, vals)
        return vals

    def _synthesize(self, pts, r, chunk=4096):
        modal = self.modal
        interp = modal.interpolator()
        out = np.empty(r.size, dtype=complex)
        for start in range(0, r.size, chunk):
            sl = slice(start, start + chunk)
            profs = interp(r[sl])  # (chunk, nmodes)
            if profs.ndim == 1:
                profs = profs[:, None]
            if self.ctx.dimension == 2:
                theta = np.arctan2(pts[sl, 1], pts[sl, 0])
                orders = np.arange(-modal.truncation, modal.truncation + 1)
                phases = np.exp(1j * np.outer(theta, orders))
                out[sl] = np.sum(profs * phases, axis=1)
            else:
                rr = r[sl]
                ct = np.divide(pts[sl, 2], rr, out=np.ones_like(rr), where=rr > 0)
                theta = np.arccos(np.clip(ct, -1, 1))
                phi = np.mod(np.arctan2(pts[sl, 1], pts[sl, 0]), 2 * np.pi)
                harm = specfun.sph_harmonic_block(modal.truncation, theta, phi)
                out[sl] = np.sum(profs * harm, axis=1)
        return out

    def values_on(self, grid: ProductGrid) -> np.ndarray:
        """Values at the nodes of a product grid (the only access for grid kinds)."""
        if self.kind == "grid":
            if grid.points.shape != self._grid.points.shape or not np.allclose(
                grid.points, self._grid.points, rtol=0, atol=1e-14 * self.ctx.radius
            ):
                raise ValueError("grid source queried on a different grid than it stores")
            return self._grid_values
        return self.evaluate(grid.points)

    # -- algebra ------------------------------------------------------------
    def scaled(self, factor: complex) -> "SourceField":
        if self.kind == "modal":
            modal = ModalProfiles(
                self.modal.dimension, self.modal.truncation, self.modal.rule,
                self.modal.values * factor,
            )
            return SourceField(self.ctx, "modal", self.support_radius, modal=modal,
                               radial_hint=self.radial_hint)
        if self.kind == "grid":
            return SourceField(
                self.ctx, "grid", self.support_radius,
                grid=self._grid, grid_values=self._grid_values * factor,
            )
        inner = self._func
        prof = self.radial_profile
        return SourceField(
            self.ctx, "callable", self.support_radius,
            func=lambda pts: factor * np.asarray(inner(pts), dtype=complex),
            radial_profile=None if prof is None else (lambda r: factor * np.asarray(prof(r), dtype=complex)),
            radial_hint=self.radial_hint,
        )

    def __add__(self, other: "SourceField") -> "SourceField":
        if not isinstance(other, SourceField):
            return NotImplemented
        if self.ctx != other.ctx:
            raise ValueError("cannot add sources over different contexts")
        if "grid" in (self.kind, other.kind):
            raise ValueError("grid sources do not support addition")
        support = max(self.support_radius, other.support_radius)
        hint = max(self.radial_hint or 0, other.radial_hint or 0) or None
        a, b = self, other

        def func(pts):
            return a.evaluate(pts) + b.evaluate(pts)

        return SourceField(self.ctx, "callable", support, func=func, radial_hint=hint)

    def __mul__(self, factor):
        return self.scaled(factor)

    __rmul__ = __mul__

    def resolve_radial_order(self, radial_order: int | None) -> int:
        """Requested radial order, or this source's own hint, or the default."""
        if radial_order is not None:
            return int(radial_order)
        return self.radial_hint or DEFAULT_RADIAL_ORDER

    # -- norms ---------------------------------------------------------------
    def l2_norm(self, radial_order=None, angular_count=None) -> float:
        """Quadrature L2 norm over the ball (cached).

        Modal sources integrate mode-by-mode (angular orthonormality turns
        the ball integral into a weighted sum of radial profile norms).
        """
        if self._norm_cache is None:
            if self.kind == "modal":
                rule = self.modal.rule
                meas = rule.weights * rule.nodes ** (self.ctx.dimension - 1)
                sq = float(np.sum(np.abs(self.modal.values) ** 2 @ meas))
                factor = 2.0 * np.pi if self.ctx.dimension == 2 else 1.0
                self._norm_cache = float(np.sqrt(factor * sq))
            else:
                if self.kind == "grid":
                    grid = self._grid
                else:
                    grid = product_grid(self.ctx, self.resolve_radial_order(radial_order), angular_count)
                vals = self.values_on(grid)
                self._norm_cache = float(np.sqrt(np.sum(np.abs(vals) ** 2 * grid.weights).real))
        return self._norm_cache


# ---------------------------------------------------------------------------
# Projection onto angular modes and onto the radial wave families
# ---------------------------------------------------------------------------
def project_modes(
    src: SourceField,
    truncation: int,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> SourceField:
    """Project a source onto angular-mode radial profiles up to the truncation.

    2D computes Fourier coefficients of the angular dependence at every
    radial node through the FFT of equispaced samples (exact for band-limited
    data); 3D projects against the conjugate orthonormal harmonics with the
    product rule.  The result is a modal source over the same support.
    """
    ctx = src.ctx
    if truncation < 0:
        raise ValueError(f"truncation must be >= 0, got {truncation}")
    if src.kind == "modal":
        return _retruncate_modal(src, truncation)
    if src.kind == "grid":
        grid = src._grid
    else:
        if angular_count is None:
            # auto-scale so the rule resolves the requested truncation
            if ctx.dimension == 2:
                angular_count = max(DEFAULT_ANGULAR_COUNT_2D, 2 * truncation + 2)
            else:
                angular_count = max(DEFAULT_POLAR_COUNT_3D, truncation + 1)
        grid = product_grid(ctx, src.resolve_radial_order(radial_order), angular_count)
    rule, ang = grid.radial, grid.angular
    vals = src.values_on(grid).reshape(rule.order, ang.count)

    if ctx.dimension == 2:
        m = ang.count
        if 2 * truncation >= m:
            raise ValueError(
                f"angular count {m} cannot resolve orders up to {truncation}; need > 2N"
            )
        spectrum = np.fft.fft(vals, axis=1) / m  # (1/2pi) * trapezoid in theta
        values = np.zeros((2 * truncation + 1, rule.order), dtype=complex)
        for n in range(-truncation, truncation + 1):
            values[n + truncation] = spectrum[:, n % m]
    else:
        # Gauss-in-cos(theta) with n_pol nodes resolves harmonic products of
        # degree up to n_pol - 1 exactly; beyond that the projection aliases.
        if truncation >= ang.polar_count:
            raise ValueError(
                f"polar count {ang.polar_count} cannot resolve degrees up to {truncation}"
            )
        theta, phi = ang.params[:, 0], ang.params[:, 1]
        harm = specfun.sph_harmonic_block(truncation, theta, phi)
        values = (vals @ (np.conj(harm) * ang.weights[:, None])).T

    modal = ModalProfiles(ctx.dimension, truncation, rule, values)
    out = SourceField(ctx, "modal", src.support_radius, modal=modal,
                      radial_profile=src.radial_profile, radial_hint=src.radial_hint)
    out._norm_cache = src._norm_cache
    return out


def _retruncate_modal(src: SourceField, truncation: int) -> SourceField:
    old = src.modal
    values = np.zeros((mode_count(src.ctx.dimension, truncation), old.rule.order), dtype=complex)
    if src.ctx.dimension == 2:
        keep = min(truncation, old.truncation)
        for n in range(-keep, keep + 1):
            values[n + truncation] = old.values[n + old.truncation]
    else:
        keep = min(truncation, old.truncation)
        for n in range(keep + 1):
            for m in range(-n, n + 1):
                values[mode_index(3, n, m)] = old.values[mode_index(3, n, m)]
    modal = ModalProfiles(src.ctx.dimension, truncation, old.rule, values)
    out = SourceField(src.ctx, "modal", src.support_radius, modal=modal,
                      radial_profile=src.radial_profile, radial_hint=src.radial_hint)
    out._norm_cache = src._norm_cache
    return out


def modal_coefficients(
    ctx: WaveContext,
    src: SourceField,
    truncation: int,
    radial_order: int | None = None,
    angular_count: int | None = None,
) -> ModalCoefficients:
    """Project the source's mode profiles onto the two radial wave families.

    2D pairs profile n with J_n(kappa r) (alpha) and J_n(i kappa r) (beta)
    under the r dr measure; 3D pairs degree n with the spherical j_n and its
    imaginary-argument counterpart under r^2 dr.
    """
    # norm of the source itself, not of its truncation (cached through the
    # projection, so this costs one grid pass at most)
    norm_f = src.l2_norm(radial_order, angular_count)
    if src.kind != "modal" or src.modal.truncation < truncation:
        src = project_modes(src, truncation, radial_order, angular_count)
    elif src.modal.truncation > truncation:
        src = _retruncate_modal(src, truncation)
    modal = src.modal
    rule = modal.rule
    r = rule.nodes
    k = ctx.kappa
    measure = rule.weights * r ** (ctx.dimension - 1)

    nmodes = mode_count(ctx.dimension, truncation)
    alpha = np.zeros(nmodes, dtype=complex)
    beta = np.zeros(nmodes, dtype=complex)
    if ctx.dimension == 2:
        for n in range(-truncation, truncation + 1):
            prof = modal.values[n + truncation]
            alpha[n + truncation] = np.sum(prof * _sp.jv(n, k * r) * measure)
            beta[n + truncation] = _ipow(n) * np.sum(prof * _sp.iv(abs(n), k * r) * measure)
    else:
        for n in range(truncation + 1):
            jn = _sp.spherical_jn(n, k * r)
            in_mod = _sp.spherical_in(n, k * r)
            lo, hi = n * n, n * n + 2 * n + 1
            block = modal.values[lo:hi]
            alpha[lo:hi] = block @ (jn * measure)
            beta[lo:hi] = _ipow(n) * (block @ (in_mod * measure))
    return ModalCoefficients(
        dimension=ctx.dimension,
        truncation=truncation,
        alpha=alpha,
        beta=beta,
        norm_f=norm_f,
    )


def default_mode_truncation(ctx: WaveContext) -> int:
    """Band-limit heuristic for source projections plus guard modes."""
    return 2 * int(np.ceil(ctx.kappa * ctx.radius)) + 16


# ---------------------------------------------------------------------------
# Nonradiating constructors
# ---------------------------------------------------------------------------
def make_2d_bessel_nonradiating(ctx: WaveContext, radial_order: int | None = None) -> SourceField:
    """Radially symmetric nonradiating source on the full disk (2D).

    Requires kappa*R to be a zero of J_0 (use
    WaveContext.with_root_wavenumber).  The source is the radial
    modified-Helmholtz operator applied to a normalized pair of J_0 powers;
    both projections onto the radial wave families vanish identically, so
    the exterior field is zero while the source itself is not.
    """
    if ctx.dimension != 2:
        raise ValueError("make_2d_bessel_nonradiating requires a 2D context")
    k, R = ctx.kappa, ctx.radius
    if abs(_sp.jv(0, k * R)) > 1e-12:
        raise ValueError(
            f"kappa*R = {k * R:.15g} is not a zero of J_0 "
            f"(|J_0| = {abs(_sp.jv(0, k * R)):.3e} > 1e-12)"
        )
    rule = radial_rule(ctx, radial_order or max(DEFAULT_RADIAL_ORDER, 8 * int(np.ceil(k * R))))
    j0 = _sp.jv(0, k * rule.nodes)
    c_quartic = float(np.sum(j0**4 * rule.nodes * rule.weights))
    c_cubic = float(np.sum(j0**3 * rule.nodes * rule.weights))
    for name, c in (("quartic", c_quartic), ("cubic", c_cubic)):
        if abs(c) < DEGENERATE_DENOMINATOR:
            raise DegenerateSourceError(f"normalizing {name} integral is numerically zero: {c:.3e}")

    def profile(r):
        r = np.asarray(r, dtype=float)
        z0 = _sp.jv(0, k * r)
        z1 = _sp.jv(1, k * r)
        # (laplacian - kappa^2) of J_0^p reduces to kappa^2 [p(p-1) J_0^(p-2) J_1^2 - (p+1) J_0^p]
        cubic_img = k * k * (6.0 * z0 * z1 * z1 - 4.0 * z0**3)
        square_img = k * k * (2.0 * z1 * z1 - 3.0 * z0 * z0)
        return (cubic_img / c_quartic - square_img / c_cubic).astype(complex)

    def potential(r):
        z0 = _sp.jv(0, k * np.asarray(r, dtype=float))
        return (z0**3 / c_quartic - z0**2 / c_cubic).astype(complex)

    src = SourceField.from_radial(ctx, profile, support_radius=R)
    src.potential_profile = potential
    return src


def make_3d_bessel_nonradiating(
    ctx: WaveContext, m1: int = 3, m2: int = 4, radial_order: int | None = None
) -> SourceField:
    """Radially symmetric nonradiating source on the full ball (3D).

    Requires kappa*R to be a zero of the order-zero spherical wave
    (kappa*R = k*pi) and two distinct exponents >= 3.
    """
    if ctx.dimension != 3:
        raise ValueError("make_3d_bessel_nonradiating requires a 3D context")
    if m1 == m2 or m1 < 3 or m2 < 3:
        raise ValueError(f"exponents must be distinct integers >= 3, got ({m1}, {m2})")
    k, R = ctx.kappa, ctx.radius
    if abs(_sp.spherical_jn(0, k * R)) > 1e-12:
        raise ValueError(
            f"kappa*R = {k * R:.15g} is not a zero of the order-zero spherical wave "
            f"(|j_0| = {abs(_sp.spherical_jn(0, k * R)):.3e} > 1e-12)"
        )
    rule = radial_rule(ctx, radial_order or max(DEFAULT_RADIAL_ORDER, 8 * int(np.ceil(k * R))))
    j0 = _sp.spherical_jn(0, k * rule.nodes)
    i0 = _sp.spherical_in(0, k * rule.nodes)
    meas = rule.nodes**2 * rule.weights
    denom = {}
    for m in (m1, m2):
        d = float(np.sum(j0**m * i0 * meas))
        if abs(d) < DEGENERATE_DENOMINATOR:
            raise DegenerateSourceError(
                f"normalizing integral for exponent {m} is numerically zero: {d:.3e}"
            )
        denom[m] = d

    def _image(r, m):
        z0 = _sp.spherical_jn(0, k * r)
        z1 = _sp.spherical_jn(1, k * r)
        # (laplacian + kappa^2) of j_0^m reduces to
        # kappa^2 [m(m-1) j_0^(m-2) j_1^2 - (m-1) j_0^m]
        return k * k * (m * (m - 1) * z0 ** (m - 2) * z1 * z1 - (m - 1) * z0**m)

    def profile(r):
        r = np.asarray(r, dtype=float)
        return (_image(r, m1) / denom[m1] - _image(r, m2) / denom[m2]).astype(complex)

    def potential(r):
        z0 = _sp.spherical_jn(0, k * np.asarray(r, dtype=float))
        return (z0**m1 / denom[m1] - z0**m2 / denom[m2]).astype(complex)

    src = SourceField.from_radial(ctx, profile, support_radius=R)
    src.potential_profile = potential
    return src


def make_bump_nonradiating(
    ctx: WaveContext,
    bump=None,
    bump_support: float | None = None,
    rho: float | None = None,
    center=None,
    amplitude: float = 1.0,
    fd_step: float | None = None,
) -> SourceField:
    """Nonradiating source obtained by running an infinitely smooth bump
    through the (negated, shifted) squared-Laplacian wave operator.

    With no ``bump`` argument, uses the built-in radial mollifier
    amplitude * exp(-1/(1 - (|x - center|/rho)^2)) whose fourth-order image
    is evaluated in closed form.  A user-supplied ``bump`` callable (with
    its ``bump_support`` radius) is differentiated by composed fourth-order
    finite-difference Laplacians instead: accuracy degrades to roughly the
    stencil truncation level, so prefer the built-in bump for certification
    work.

    The bump support must stay strictly inside the context ball.
    """
    d = ctx.dimension
    k4 = ctx.kappa**4
    if bump is not None:
        if bump_support is None:
            raise ValueError("bump_support is required with a user-supplied bump")
        if bump_support >= ctx.radius:
            raise SupportViolationError(
                f"bump support {bump_support} must be strictly inside R = {ctx.radius}"
            )
        h = fd_step if fd_step is not None else 1e-2 * bump_support

        def func(points):
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            vals = -( _fd_bilaplacian(bump, pts, h, d) - k4 * np.asarray(bump(pts), dtype=complex))
            return vals

        return SourceField.from_callable(ctx, func, support_radius=bump_support)

    rho = 0.8 * ctx.radius if rho is None else float(rho)
    center = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    if center.shape != (d,):
        raise ValueError(f"center must have {d} components")
    reach = float(np.linalg.norm(center)) + rho
    if reach >= ctx.radius:
        raise SupportViolationError(
            f"bump support (|center| + rho = {reach}) must stay strictly inside R = {ctx.radius}"
        )

    def bump_value(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        s = np.linalg.norm(pts - center, axis=-1)
        g, _ = _mollifier_pair(s, rho, amplitude, d)
        return g.astype(complex)

    def func(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        s = np.linalg.norm(pts - center, axis=-1)
        g, bilap = _mollifier_pair(s, rho, amplitude, d)
        return (-(bilap - k4 * g)).astype(complex)

    src = SourceField.from_callable(
        ctx, func, support_radius=reach, radial_hint=_BUMP_RADIAL_ORDER
    )
    src.bump_value = bump_value
    return src


def _mollifier_pair(s, rho, amplitude, d):
    """(g, bilaplacian of g) for the built-in radial mollifier in d dimensions."""
    s = np.asarray(s, dtype=float)
    g = np.zeros_like(s)
    bilap = np.zeros_like(s)

    inside = s < rho * (1.0 - 1e-14)
    tiny = inside & (s < _BUMP_TAYLOR_FRACTION * rho)
    main = inside & ~tiny

    if np.any(main):
        sm = s[main]
        t = (sm / rho) ** 2
        v = -1.0 / (1.0 - t)
        live = v > -700.0  # exp underflows beyond; true values < 1e-304
        sm, t, v = sm[live], t[live], v[live]
        w = 1.0 / (rho * rho - sm * sm)
        w1 = 2.0 * sm * w * w
        w2 = 2.0 * w * w + 8.0 * sm**2 * w**3
        w3 = 24.0 * sm * w**3 + 48.0 * sm**3 * w**4
        w4 = 24.0 * w**3 + 288.0 * sm**2 * w**4 + 384.0 * sm**4 * w**5
        r2 = rho * rho
        v1, v2, v3, v4 = -r2 * w1, -r2 * w2, -r2 * w3, -r2 * w4
        gm = amplitude * np.exp(v)
        g1 = gm * v1
        g2 = gm * (v2 + v1**2)
        g3 = gm * (v3 + 3.0 * v2 * v1 + v1**3)
        g4 = gm * (v4 + 4.0 * v3 * v1 + 3.0 * v2**2 + 6.0 * v2 * v1**2 + v1**4)
        radial = (
            g4
            + 2.0 * (d - 1) * g3 / sm
            + (d - 1) * (d - 3) * (g2 / sm**2 - g1 / sm**3)
        )
        idx = np.flatnonzero(main)[live]
        g[idx] = gm
        bilap[idx] = radial

    if np.any(tiny):
        st = s[tiny]
        t = (st / rho) ** 2
        coeff = np.array([1.0, -1.0, -0.5, -1.0 / 6.0, 1.0 / 24.0]) * amplitude * np.exp(-1.0)
        g[tiny] = coeff[0] + coeff[1] * t + coeff[2] * t**2 + coeff[3] * t**3 + coeff[4] * t**4
        bilap_t = np.zeros_like(st)
        for kk in range(2, 5):
            mult = (2 * kk) * (2 * kk + d - 2) * (2 * kk - 2) * (2 * kk + d - 4)
            bilap_t += coeff[kk] / rho ** (2 * kk) * mult * st ** (2 * kk - 4)
        bilap[tiny] = bilap_t
    return g, bilap


def _fd_laplacian(func, pts, h, d):
    """Fourth-order five-point-per-axis Laplacian of a pointwise field."""
    vals = -(30.0 / 12.0) * d * np.asarray(func(pts), dtype=complex)
    for axis in range(d):
        for step, c in ((2, -1.0), (1, 16.0), (-1, 16.0), (-2, -1.0)):
            shifted = pts.copy()
            shifted[:, axis] += step * h
            vals = vals + c / 12.0 * np.asarray(func(shifted), dtype=complex)
    return vals / (h * h)


def _fd_bilaplacian(func, pts, h, d):
    """Composed finite-difference squared Laplacian (documented accuracy downgrade)."""
    return _fd_laplacian(lambda q: _fd_laplacian(func, q, h, d), pts, h, d)


# ---------------------------------------------------------------------------
# Convenience sources
# ---------------------------------------------------------------------------
def gaussian_source(
    ctx: WaveContext,
    center=None,
    sigma: float | None = None,
    amplitude: float = 1.0,
    support_radius: float | None = None,
) -> SourceField:
    """Gaussian blob truncated at the support radius (a generic radiating source)."""
    d = ctx.dimension
    center = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    if center.shape != (d,):
        raise ValueError(f"center must have {d} components")
    sigma = 0.15 * ctx.radius if sigma is None else float(sigma)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if support_radius is None:
        support_radius = ctx.radius

    def func(points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        q = np.sum((pts - center) ** 2, axis=-1) / (2.0 * sigma * sigma)
        return amplitude * np.exp(-q) + 0j

    return SourceField.from_callable(ctx, func, support_radius=support_radius)


# ---------------------------------------------------------------------------
# Source definition files
# ---------------------------------------------------------------------------
_SOURCE_KEYS = {"dimension", "R", "kappa", "root_index", "kind", "parameters"}
_PARAM_KEYS = {
    "zero": set(),
    "gaussian": {"center", "sigma", "amplitude", "support_radius"},
    "bump_nonradiating": {"rho", "center", "amplitude"},
    "bessel_nonradiating": {"m1", "m2"},
}


def context_from_config(cfg: dict) -> WaveContext:
    """WaveContext from the {dimension, R, kappa | root_index} part of a config."""
    dimension = cfg.get("dimension")
    if dimension not in (2, 3):
        raise ValueError(f"config key 'dimension' must be 2 or 3, got {dimension!r}")
    R = cfg.get("R")
    if not isinstance(R, (int, float)) or not np.isfinite(R) or R <= 0:
        raise ValueError(f"config key 'R' must be a positive number, got {R!r}")
    has_kappa = "kappa" in cfg
    has_root = "root_index" in cfg
    if has_kappa == has_root:
        raise ValueError("config must set exactly one of 'kappa' or 'root_index'")
    if has_root:
        root_index = cfg["root_index"]
        if not isinstance(root_index, int) or root_index < 1:
            raise ValueError(f"config key 'root_index' must be a positive integer, got {root_index!r}")
        return WaveContext.with_root_wavenumber(dimension, float(R), root_index)
    kappa = cfg["kappa"]
    if not isinstance(kappa, (int, float)) or not np.isfinite(kappa) or kappa <= 0:
        raise ValueError(f"config key 'kappa' must be a positive number, got {kappa!r}")
    return WaveContext(dimension=dimension, kappa=float(kappa), radius=float(R))


def source_from_config(cfg: dict) -> tuple[WaveContext, SourceField]:
    """Build (context, source) from a JSON-compatible definition.

    Schema: {dimension, R, kappa | root_index, kind, parameters}; unknown
    keys are rejected.  Kinds: 'zero', 'gaussian', 'bump_nonradiating',
    'bessel_nonradiating'.
    """
    unknown = set(cfg) - _SOURCE_KEYS
    if unknown:
        raise ValueError(f"unknown config key {sorted(unknown)[0]!r}")
    ctx = context_from_config(cfg)
    kind = cfg.get("kind")
    if kind not in _PARAM_KEYS:
        raise ValueError(f"config key 'kind' must be one of {sorted(_PARAM_KEYS)}, got {kind!r}")
    params = cfg.get("parameters", {})
    if not isinstance(params, dict):
        raise ValueError("config key 'parameters' must be an object")
    bad = set(params) - _PARAM_KEYS[kind]
    if bad:
        raise ValueError(f"unknown parameter {sorted(bad)[0]!r} for kind {kind!r}")

    if kind == "zero":
        return ctx, SourceField.zero(ctx)
    if kind == "gaussian":
        return ctx, gaussian_source(ctx, **params)
    if kind == "bump_nonradiating":
        return ctx, make_bump_nonradiating(ctx, **params)
    if ctx.dimension == 2:
        if params:
            raise ValueError("parameters 'm1'/'m2' apply to 3D bessel_nonradiating only")
        return ctx, make_2d_bessel_nonradiating(ctx)
    return ctx, make_3d_bessel_nonradiating(ctx, int(params.get("m1", 3)), int(params.get("m2", 4)))
