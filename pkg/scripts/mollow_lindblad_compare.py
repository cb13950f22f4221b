"""Resonance fluorescence of a strongly driven emitter: master-equation spectrum against the asymptotic triplet."""

import argparse

import numpy as np
from scipy.integrate import trapezoid

from dressedlines import lindblad as lb
from dressedlines.mollow import DriveField, asymptotic_mollow_spectrum


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rabi", type=float, default=20.0)
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--grid", type=int, default=1201)
    args = ap.parse_args(argv)

    sim = lb.simulate_mollow(args.rabi, args.gamma, n_grid=args.grid)
    w = sim.spectrum.omega
    ref = asymptotic_mollow_spectrum(DriveField(0.0, args.rabi), args.gamma, w)
    num = sim.spectrum.intensity / trapezoid(sim.spectrum.intensity, w)
    ana = ref.intensity / trapezoid(ref.intensity, w)
    print(f"excited population {sim.excited_population:.6f}")
    for pos, h in sim.peaks:
        print(f"  peak at {pos:+8.3f}  height {h:.4e}")
    heights = sorted(sim.peaks, key=lambda ph: abs(ph[0]))
    if len(heights) == 3:
        print(f"centre/sideband ratio {heights[0][1] / (0.5 * (heights[1][1] + heights[2][1])):.3f}")
    print(f"max |numeric - asymptotic| / max = {np.max(np.abs(num - ana)) / np.max(ana):.3e}")

    tau = np.linspace(0, 40 / args.gamma, 8001)
    g2 = lb.correlation_g2(lb.driven_tls_problem(args.rabi, 0.0, args.gamma), tau)
    print(f"g2(0) = {g2[0]:.2e}  g2(max tau) = {g2[-1]:.6f}")


if __name__ == "__main__":
    main()
