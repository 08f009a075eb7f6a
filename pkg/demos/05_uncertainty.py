"""Sweep clock wave packets of varying width and chart the
time-energy uncertainty product against the hbar/2 floor.

A plain Gaussian packet on the time axis rides the floor at every
width: the two spreads trade off reciprocally while their product
stays pinned at hbar/2.  Adding a quadratic phase chirp breaks the
minimality and the product lifts off.  The floor argument needs
band-limited states, so the sweep stays away from widths close to the
grid spacing or the full period.
"""

import numpy as np

from chronos.axes import AxisGrid, PhysicalConstants, gaussian_state
from chronos.constraints import uncertainty_product


def main():
    k = PhysicalConstants()
    n = 256
    total = 32.0 / k.omega
    t_grid = AxisGrid(n=n, origin=0.0, spacing=total / n, label="time")
    print("time axis: %d points over %.1f periods of the oscillator"
          % (n, total * k.omega / (2.0 * np.pi)))
    print("floor: hbar/2 = %.6f" % (0.5 * k.hbar))
    print()

    print("%10s  %10s  %10s  %12s  %10s" % ("sigma", "spread_t", "spread_e",
                                            "product", "over floor"))
    for sigma in np.geomspace(4.0 * t_grid.spacing, total / 16.0, 9):
        phi = gaussian_state(t_grid, total / 2.0, float(sigma))
        dt, ds, product = uncertainty_product(phi, t_grid, k)
        print("%10.4f  %10.4f  %10.4f  %12.8f  %9.4f%%"
              % (sigma, dt, ds, product,
                 100.0 * (product / (0.5 * k.hbar) - 1.0)))
    print()

    sigma_min = 1.0 / k.omega
    phi = gaussian_state(t_grid, total / 2.0, sigma_min)
    _, _, product = uncertainty_product(phi, t_grid, k)
    print("minimum-uncertainty width sigma = 1/omega = %.4f:" % sigma_min)
    print("  product %.12f, offset from hbar/2: %.2e"
          % (product, product - 0.5 * k.hbar))
    print()

    print("chirped packet, same envelope with phase exp(i b t^2):")
    centered = t_grid.samples - total / 2.0
    for beta in (0.25, 0.5, 1.0):
        chirped = phi * np.exp(1j * beta * centered ** 2)
        dt, ds, product = uncertainty_product(chirped, t_grid, k)
        print("  b = %.2f: spread_t %.4f, spread_e %.4f, product %.6f"
              % (beta, dt, ds, product))


if __name__ == "__main__":
    main()
