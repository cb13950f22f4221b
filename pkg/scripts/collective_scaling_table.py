"""N^(3/2) line-position model against exact Tavis-Cummings diagonalization, plus the measured doublets."""

from dressedlines.analysis import PeakSet, extract_collective_ladder
from dressedlines.collective import scaling_comparison

OMEGA0 = 26196.0
MEASURED = (1372.0, 4300.0, 7000.0, 9590.0)


def main():
    print(f"{'N':>2} {'TC (g=1372)':>12} {'N^3/2 model':>12} {'ratio':>6}")
    for r in scaling_comparison(1372.0, omega_single=1372.0):
        print(f"{r['N']:>2} {r['tavis_cummings_cm1']:>12.1f} {r['n_sqrt_n_cm1']:>12.1f} {r['scaling_ratio']:>6.3f}")

    peaks = PeakSet.from_positions([OMEGA0 + s * o / 2 for o in MEASURED for s in (1, -1)])
    table = extract_collective_ladder(peaks, OMEGA0)
    print("\nmeasured doublets")
    for row in table.rows:
        print(f"  N={row.order}  measured {row.measured:7.0f}  model {row.predicted:8.1f}  dev {row.deviation_pct:+6.1f}%")


if __name__ == "__main__":
    main()
