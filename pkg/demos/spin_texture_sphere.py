"""Spin texture of the bright state over a constant-energy momentum sphere.

Samples the sphere |p| = m = E, computes the restricted spin of the bright
state at each direction and checks it against the helicity expectation,
then projects everything stereographically for a quiver plot.
"""

import argparse

from diracsim import spin_texture, svg_quiver_plot


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--energy", type=float, default=20.0, help="sphere energy in MHz")
    ap.add_argument("--polar", type=int, default=13)
    ap.add_argument("--azimuthal", type=int, default=24)
    ap.add_argument("--svg", default=None, help="optional output plot path")
    args = ap.parse_args()

    samples = spin_texture(args.energy, n_polar=args.polar, n_azimuthal=args.azimuthal)
    worst = max(abs(s.radial_component - s.helicity) for s in samples)
    print(f"{len(samples)} directions on the |p| = m = {args.energy} MHz sphere")
    print(f"max |radial spin - helicity| = {worst:.2e}")

    north = next(s for s in samples if s.at_north_pole)
    south = next(s for s in samples if abs(s.direction[2] + 1.0) < 1e-12)
    for s in (north, south):
        print(
            f"pole ({s.direction[2]:+.0f}z): spin = "
            f"({s.spin.sx:+.3f}, {s.spin.sy:+.3f}, {s.spin.sz:+.3f})"
        )

    if args.svg:
        pts = [s for s in samples if not s.at_north_pole]
        svg_quiver_plot(
            args.svg,
            [s.stereo_x for s in pts],
            [s.stereo_y for s in pts],
            [s.spin.sx for s in pts],
            [s.spin.sy for s in pts],
            "Bright-state spin texture (stereographic)",
            arrow_scale=0.6,
        )
        print("wrote", args.svg)


if __name__ == "__main__":
    main()
