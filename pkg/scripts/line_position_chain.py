"""Line-position arithmetic for the Ni2 picocavity: doublets, sideband ladder, coupling strength, geometry."""

from dressedlines.collective import CollectiveModel, assess_coupling, collective_rabi
from dressedlines.jc import rabi_doublet_lines
from dressedlines.mollow import MollowLadder, ladder_table
from dressedlines.resonator import ResonatorGeometry, interfacial_gap, mode_volume_cylinder, purcell_factor
from dressedlines.units import SpectralValue, cm1_to_nm, energy_difference, nm_to_cm1

OMEGA0 = 26196.0  # bare transition, cm^-1
OMEGA_SINGLE = 1372.0  # single-emitter splitting, cm^-1
SPACING = 1450.0  # sideband spacing, cm^-1


def main():
    print("collective doublets (N^3/2 model)")
    for n in (1, 2, 3, 4):
        split = collective_rabi(CollectiveModel(n, OMEGA_SINGLE)).magnitude
        blue, red = rabi_doublet_lines(OMEGA0, split)
        print(f"  N={n}  Omega={split:8.1f} cm^-1  lines {cm1_to_nm(blue):6.1f} / {cm1_to_nm(red):6.1f} nm")

    print("sideband ladder about 382 nm")
    for row in ladder_table(MollowLadder(nm_to_cm1(382), SPACING, (1, 2, 3, 4, 5))):
        print(f"  N={row['order']}  red {row['red_nm']:6.1f} nm  blue {row['blue_nm']:6.1f} nm")

    a = assess_coupling(9590.0, nm_to_cm1(382))
    print(f"eta = {a.eta:.3f} ({a.regime})")
    off = energy_difference(SpectralValue(417, "nm"), SpectralValue(430, "nm")).magnitude
    print(f"417/430 nm offset = {off:.1f} cm^-1 (half spacing {SPACING / 2:.0f})")

    geom = ResonatorGeometry(0.25, 0.063)
    v = mode_volume_cylinder(geom)
    fp = purcell_factor(SpectralValue(380, "nm"), 1.0, 7.0, v)
    print(f"gap {interfacial_gap(geom):.3f} nm  V = {v:.3e} nm^3  Fp = {fp:.2e}")


if __name__ == "__main__":
    main()
