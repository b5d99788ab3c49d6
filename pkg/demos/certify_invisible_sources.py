"""Build the three explicit invisible-source families and certify them.

Each construction is checked by all three equivalent routes: mode
projections, transforms on the kappa sphere, and the exterior field itself.
A generic Gaussian blob is certified alongside for contrast (it radiates).
"""

import numpy as np

from biharwave import (
    WaveContext,
    gaussian_source,
    make_2d_bessel_nonradiating,
    make_3d_bessel_nonradiating,
    make_bump_nonradiating,
    verdict,
)


def describe(label, ctx, src):
    result = verdict(ctx, src)
    word = "invisible" if result.is_nonradiating else "RADIATES"
    print(
        f"{label:34s} modal {result.residual_modal:9.2e}   "
        f"spectral {result.residual_spectral:9.2e}   "
        f"field {result.residual_field:9.2e}   -> {word}"
    )


print("residuals are relative to the source L2 norm; tolerance 1e-6\n")

ctx2 = WaveContext.with_root_wavenumber(2, radius=1.0, root_index=1)
print(f"2D, kappa*R at the first J_0 zero ({ctx2.kappa:.6f})")
describe("  radial J_0-power pair", ctx2, make_2d_bessel_nonradiating(ctx2))
describe("  smooth bump, operator image", ctx2, make_bump_nonradiating(ctx2))
describe(
    "  offset Gaussian (control)",
    ctx2,
    gaussian_source(ctx2, center=[0.25, 0.0], sigma=0.1, support_radius=0.9),
)

ctx3 = WaveContext.with_root_wavenumber(3, radius=1.0, root_index=1)
print(f"\n3D, kappa*R = pi ({ctx3.kappa:.6f})")
describe("  radial wave-power pair (3,4)", ctx3, make_3d_bessel_nonradiating(ctx3, 3, 4))
describe("  radial wave-power pair (3,5)", ctx3, make_3d_bessel_nonradiating(ctx3, 3, 5))
describe("  smooth bump, operator image", ctx3, make_bump_nonradiating(ctx3))
describe(
    "  offset Gaussian (control)",
    ctx3,
    gaussian_source(ctx3, center=[0.2, 0.1, 0.15], sigma=0.1, support_radius=0.9),
)

print("\nexterior field of the 2D pair along a ray (direct quadrature):")
from biharwave import eval_field

src = make_2d_bessel_nonradiating(ctx2)
scale = src.l2_norm()
for factor in (1.05, 1.5, 3.0):
    x = np.array([factor * ctx2.radius, 0.0])
    sample = eval_field(ctx2, src, x, method="quadrature")
    print(f"  |x| = {factor:4.2f} R   |u| / ||f|| = {abs(sample.u) / scale:.3e}")
