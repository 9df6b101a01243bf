#!/usr/bin/env python3
"""Write the bundled synthetic absorption spectra to data/spectra/.

These curves are NOT measured or database-derived. Each species gets a sum
of Lorentzian lines at its well-known millimeter-wave resonances plus a weak
quadratic continuum, scaled so that pure O2 absorbs 0.1292 Np/m at 60 GHz
(0.209 x 0.1292 ~ 2.7e-2 Np/m in air). Species without lines in the band
get all-zero spectra.

Usage: python3 scripts/make_synthetic_spectra.py [output_dir]
"""

import sys
from pathlib import Path

F_START_HZ = 10_000_000_000
F_STOP_HZ = 400_000_000_000
F_STEP_HZ = 100_000_000

# (centre Hz, half width Hz, relative strength)
LINES = {
    "O2": [(60.0e9, 5.0e9, 1.0), (118.75e9, 1.5e9, 0.45)],
    "H2O": [(22.235e9, 3.0e9, 0.02), (183.31e9, 3.0e9, 1.0)],
}
CONTINUUM = {"O2": 2e-4, "H2O": 4e-3}
# Pure-gas coefficient (Np/m) pinned at one frequency.
ANCHOR = {"O2": (60.0e9, 0.1292), "H2O": (183.31e9, 12.0)}
ZERO_SPECIES = ["CO2", "O3", "N2O", "CO", "CH4", "N2"]


def shape(species, f):
    total = CONTINUUM[species] * (f / 100e9) ** 2
    for centre, width, strength in LINES[species]:
        total += strength * width**2 / ((f - centre) ** 2 + width**2)
    return total


def frequencies():
    return range(F_START_HZ, F_STOP_HZ + 1, F_STEP_HZ)


def write(path, species, values):
    with open(path, "w", newline="\n") as out:
        out.write(f"# SYNTHETIC {species} spectrum, pure gas, 273 K, 1 atm.\n")
        out.write("# Lorentzian stand-in generated by scripts/make_synthetic_spectra.py;\n")
        out.write("# not measured data.\n")
        out.write("frequency_hz,k_per_m\n")
        for f, k in zip(frequencies(), values):
            out.write(f"{f},{k:.6e}\n")


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "spectra"
    root.mkdir(parents=True, exist_ok=True)
    for species in LINES:
        f0, k0 = ANCHOR[species]
        scale = k0 / shape(species, f0)
        write(root / f"{species.lower()}.csv", species, [scale * shape(species, f) for f in frequencies()])
    for species in ZERO_SPECIES:
        write(root / f"{species.lower()}.csv", species, [0.0 for _ in frequencies()])
    with open(root / "vacuum.csv", "w", newline="\n") as out:
        out.write("# All-zero spectrum for vacuum runs; usable as any species.\n")
        out.write("frequency_hz,k_per_m\n")
        for f in frequencies():
            out.write(f"{f},0\n")


if __name__ == "__main__":
    main()
