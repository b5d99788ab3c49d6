"""Deterministic quadrature over radial intervals, the disk/ball, and its boundary.

Node/weight sets are plain data and are reused across the library: the same
radial rule that integrates a source also carries its angular-mode profiles,
and the boundary grid doubles as the measurement surface for traces.

Defaults (radial 64, angular 256 in 2D, Gauss-32 x 64 in 3D) are chosen so
the shipped radially-symmetric test sources self-converge below 1e-10; the
integrands are smooth in r, so Gauss-Legendre converges spectrally, and the
periodic trapezoid rule is spectrally accurate in the angles with exact
discrete orthogonality of Fourier modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .context import WaveContext

DEFAULT_RADIAL_ORDER = 64
DEFAULT_ANGULAR_COUNT_2D = 256
DEFAULT_POLAR_COUNT_3D = 32


@dataclass(frozen=True)
class RadialRule:
    """Gauss-Legendre nodes/weights on [0, R]; weights integrate plain dr."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, values: np.ndarray, power: int = 0) -> complex:
        """Sum values * r**power against the rule (power=1 gives the r dr measure)."""
        if power:
            return complex(np.sum(values * self.weights * self.nodes**power))
        return complex(np.sum(values * self.weights))


@dataclass(frozen=True)
class AngularRule:
    """Quadrature over the unit circle (2D) or unit sphere (3D).

    directions has shape (M, d); weights sum to 2 pi (2D) or 4 pi (3D).
    params holds the parametrization per node: theta (2D) or
    (theta_polar, phi) (3D).  In 3D the grid is a tensor product of Gauss
    nodes in cos(theta) with equispaced phi, flattened polar-major;
    polar_count/azimuth_count record the factor sizes (0 in 2D).
    """

    dimension: int
    directions: np.ndarray
    weights: np.ndarray
    params: np.ndarray
    polar_count: int = 0
    azimuth_count: int = 0

    @property
    def count(self) -> int:
        return self.directions.shape[0]


@dataclass(frozen=True)
class BoundaryGrid:
    """Measurement nodes on the boundary sphere of radius R.

    points = R * normals; weights are surface weights summing to the sphere
    measure; params as in AngularRule.
    """

    radius: float
    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    params: np.ndarray

    @property
    def count(self) -> int:
        return self.points.shape[0]


def radial_rule(ctx: WaveContext, order: int = DEFAULT_RADIAL_ORDER) -> RadialRule:
    """Gauss-Legendre rule mapped to [0, R]; exact for polynomials of degree 2*order - 1."""
    if order < 2:
        raise ValueError(f"radial order must be >= 2, got {order}")
    t, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * ctx.radius
    return RadialRule(nodes=half * (t + 1.0), weights=half * w, order=order)


def angular_rule(ctx: WaveContext, count: int | None = None) -> AngularRule:
    """Unit-circle/unit-sphere rule.

    2D: count equispaced angles with weight 2 pi / count.
    3D: count Gauss nodes in cos(theta) times 2*count equispaced azimuths;
    integrates spherical harmonics up to degree count - 1 exactly.
    """
    if ctx.dimension == 2:
        m = DEFAULT_ANGULAR_COUNT_2D if count is None else int(count)
        if m < 4:
            raise ValueError(f"angular count must be >= 4, got {m}")
        theta = 2.0 * np.pi * np.arange(m) / m
        dirs = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(m, 2.0 * np.pi / m)
        return AngularRule(2, dirs, weights, theta)

    n_pol = DEFAULT_POLAR_COUNT_3D if count is None else int(count)
    if n_pol < 2:
        raise ValueError(f"polar count must be >= 2, got {n_pol}")
    n_az = 2 * n_pol
    c, wc = np.polynomial.legendre.leggauss(n_pol)  # nodes in cos(theta)
    theta = np.arccos(c)
    phi = 2.0 * np.pi * np.arange(n_az) / n_az
    wphi = 2.0 * np.pi / n_az

    tt = np.repeat(theta, n_az)
    pp = np.tile(phi, n_pol)
    ww = np.repeat(wc, n_az) * wphi
    st = np.sin(tt)
    dirs = np.column_stack([st * np.cos(pp), st * np.sin(pp), np.cos(tt)])
    return AngularRule(3, dirs, ww, np.column_stack([tt, pp]), n_pol, n_az)


def boundary_grid(ctx: WaveContext, resolution: int | None = None) -> BoundaryGrid:
    """Grid on the boundary sphere |x| = R with outward unit normals.

    resolution is the angular count (2D) or polar count (3D); must be >= 8.
    """
    if resolution is not None and resolution < 8:
        raise ValueError(f"resolution must be >= 8, got {resolution}")
    ang = angular_rule(ctx, resolution)
    scale = ctx.radius ** (ctx.dimension - 1)
    return BoundaryGrid(
        radius=ctx.radius,
        points=ctx.radius * ang.directions,
        normals=ang.directions,
        weights=scale * ang.weights,
        params=ang.params,
    )


@dataclass(frozen=True)
class ProductGrid:
    """Tensor product of a radial rule with an angular rule over the ball.

    points has shape (n_r * n_ang, d) ordered radial-major; weights include
    the r**(d-1) volume factor, so sum(weights * g(points)) integrates g
    over the ball.
    """

    radial: RadialRule
    angular: AngularRule
    points: np.ndarray
    weights: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (self.radial.order, self.angular.count)


def product_grid(
    ctx: WaveContext,
    radial_order: int = DEFAULT_RADIAL_ORDER,
    angular_count: int | None = None,
) -> ProductGrid:
    """Quadrature grid over the ball B_R used for volume integrals and projections."""
    rad = radial_rule(ctx, radial_order)
    ang = angular_rule(ctx, angular_count)
    pts = rad.nodes[:, None, None] * ang.directions[None, :, :]
    w = (rad.weights * rad.nodes ** (ctx.dimension - 1))[:, None] * ang.weights[None, :]
    return ProductGrid(
        radial=rad,
        angular=ang,
        points=pts.reshape(-1, ctx.dimension),
        weights=w.reshape(-1),
    )


def _volume_integrate(ctx, g, radial_order, angular_count):
    grid = product_grid(ctx, radial_order, angular_count)
    vals = np.asarray(g(grid.points))
    if vals.shape != (grid.points.shape[0],):
        raise ValueError("integrand must return one value per evaluation point")
    return complex(np.sum(vals * grid.weights))


def disk_integrate(
    ctx: WaveContext,
    g,
    radial_order: int = DEFAULT_RADIAL_ORDER,
    angular_count: int | None = None,
) -> complex:
    """Integrate g over the disk B_R (2D).  g maps (M, 2) points to M values."""
    if ctx.dimension != 2:
        raise ValueError("disk_integrate requires a 2D context; use ball_integrate in 3D")
    return _volume_integrate(ctx, g, radial_order, angular_count)


def ball_integrate(
    ctx: WaveContext,
    g,
    radial_order: int = DEFAULT_RADIAL_ORDER,
    angular_count: int | None = None,
) -> complex:
    """Integrate g over the ball B_R (3D)."""
    if ctx.dimension != 3:
        raise ValueError("ball_integrate requires a 3D context; use disk_integrate in 2D")
    return _volume_integrate(ctx, g, radial_order, angular_count)


def volume_integrate(
    ctx: WaveContext,
    g,
    radial_order: int = DEFAULT_RADIAL_ORDER,
    angular_count: int | None = None,
) -> complex:
    """Dimension-dispatching form of disk_integrate / ball_integrate."""
    return _volume_integrate(ctx, g, radial_order, angular_count)
