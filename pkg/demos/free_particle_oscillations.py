"""Population oscillations of a free four-level particle.

Starting from the bottom level, only the bright superposition of the two
middle levels gets populated; the top level stays empty no matter how long
the drive runs. The oscillation frequency is the relativistic energy.
"""

import argparse

import numpy as np

from diracsim import (
    DiracParams,
    TimeGrid,
    build_dirac_hamiltonian,
    evolve_static,
    relativistic_energy,
    svg_line_plot,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--masses", type=float, nargs="+", default=[0.0, 5.0, 10.0, 20.0])
    ap.add_argument("--px", type=float, default=20.0, help="x momentum in MHz")
    ap.add_argument("--t-end", type=float, default=0.2, help="window length in us")
    ap.add_argument("--svg", default=None, help="optional output plot path")
    args = ap.parse_args()

    grid = TimeGrid(0.0, args.t_end, 801)
    psi0 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    series = {}
    print(f"px = {args.px} MHz, window {args.t_end} us")
    for mass in args.masses:
        params = DiracParams(mass_mhz=mass, momentum_mhz=(args.px, 0.0, 0.0))
        traj = evolve_static(build_dirac_hamiltonian(params), psi0, grid)
        p0 = traj.populations[:, 0]
        p3 = traj.populations[:, 3]
        # energy in ordinary MHz for printing
        f = relativistic_energy(params) / (2.0 * np.pi)
        print(
            f"m = {mass:6.2f} MHz   energy = {f:7.3f} MHz   "
            f"min P0 = {p0.min():.6f}   max P3 = {p3.max():.2e}"
        )
        series[f"m={mass:g}"] = p0
    if args.svg:
        svg_line_plot(
            args.svg,
            grid.times(),
            series,
            "Bottom-level population vs time",
            "time (us)",
            "P0",
        )
        print("wrote", args.svg)


if __name__ == "__main__":
    main()
