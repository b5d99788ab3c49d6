"""The inverse source problem has no unique answer at a single frequency.

Take any radiating source f and add an invisible source g of comparable
size: every boundary measurement channel stays the same to machine
precision, so no algorithm consuming fixed-frequency boundary data can
tell f and f + g apart.
"""

import numpy as np

from biharwave import (
    WaveContext,
    boundary_grid,
    boundary_trace,
    gaussian_source,
    make_2d_bessel_nonradiating,
)

ctx = WaveContext.with_root_wavenumber(2, radius=1.0, root_index=1)
f = gaussian_source(ctx, center=[0.25, 0.0], sigma=0.1, support_radius=0.9)
g = make_2d_bessel_nonradiating(ctx)
g = g.scaled(2.0 * f.l2_norm() / g.l2_norm())

print(f"||f|| = {f.l2_norm():.4f},  ||g|| = {g.l2_norm():.4f}  (perturbation twice the size)\n")

grid = boundary_grid(ctx, 16)
tr_f = boundary_trace(ctx, f, grid)
tr_fg = boundary_trace(ctx, f + g, grid)

print(f"{'theta':>8s} {'u(f)':>22s} {'u(f+g)':>22s} {'gap':>10s}")
for i in range(grid.count):
    a, b = tr_f.u[i], tr_fg.u[i]
    print(
        f"{grid.params[i]:8.4f} {a.real:10.6f}{a.imag:+10.6f}j "
        f"{b.real:10.6f}{b.imag:+10.6f}j {abs(a - b):10.2e}"
    )

gap = np.max(np.abs(tr_f.stacked() - tr_fg.stacked()))
print(f"\nmax gap across all four channels: {gap:.2e}")
print(f"relative to ||f|| + ||g||:         {gap / (f.l2_norm() + g.l2_norm()):.2e}")
print("\nthe perturbation is invisible: boundary data cannot determine the source")
