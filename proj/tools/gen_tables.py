#!/usr/bin/env python3
"""Regenerate the material tables under data/."""
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data")

# Room-temperature crystalline Si below 1.25 um (after Green 2008).
SI_VIS = [
    (0.30, 5.00, 4.2), (0.35, 5.48, 2.9), (0.40, 5.57, 0.387), (0.45, 4.67, 0.0914),
    (0.50, 4.30, 0.0441), (0.55, 4.08, 0.0280), (0.60, 3.94, 0.0198), (0.65, 3.85, 0.0145),
    (0.70, 3.78, 0.0106), (0.75, 3.73, 0.00776), (0.80, 3.68, 0.00541), (0.85, 3.65, 0.00362),
    (0.90, 3.62, 0.00219), (0.95, 3.59, 0.00119), (1.00, 3.57, 5.09e-4), (1.05, 3.56, 1.36e-4),
    (1.10, 3.54, 3.06e-5), (1.15, 3.53, 2.47e-6), (1.20, 3.52, 2.1e-7),
]


def si_sellmeier(lam):
    n2 = 11.6858 + 0.939816 / lam**2 + 0.00810461 * 1.1071**2 / (lam**2 - 1.1071**2)
    return math.sqrt(n2)


def au_drude(lam, wp=72500.0, wt=215.0):
    # Ordal et al. fit; interband transitions below ~0.5 um are not represented
    nu = 1e4 / lam
    eps = 1 - wp**2 / complex(nu**2, nu * wt)
    nk = eps ** 0.5
    return nk.real, nk.imag


def log_grid(lo, hi, n):
    return [lo * (hi / lo) ** (i / (n - 1)) for i in range(n)]


def write_si():
    with open(os.path.join(OUT, "si_nk.csv"), "w") as f:
        f.write("# crystalline Si, undoped, 300 K\n# version: 1\n")
        f.write("wavelength_um,n,k\n")
        for lam, n, k in SI_VIS:
            f.write(f"{lam:.6g},{n:.6g},{k:.6g}\n")
        for lam in log_grid(1.25, 25.0, 120):
            f.write(f"{lam:.6g},{si_sellmeier(lam):.6g},0\n")


def write_au():
    with open(os.path.join(OUT, "au_nk.csv"), "w") as f:
        f.write("# Au, Drude fit wp=72500 cm-1 wt=215 cm-1\n# version: 1\n")
        f.write("wavelength_um,n,k\n")
        for lam in log_grid(0.25, 25.0, 240):
            n, k = au_drude(lam)
            f.write(f"{lam:.6g},{n:.6g},{k:.6g}\n")


def write_cp():
    with open(os.path.join(OUT, "si_cp.csv"), "w") as f:
        f.write("# solid Si heat capacity, 844 + 0.12 T - 1.55e7/T^2 clipped to [700, 1050]\n")
        f.write("# version: 1\n")
        f.write("T_K,cp_J_per_kgK\n")
        for i in range(0, 301):
            t = 200.0 + 5.0 * i
            cp = min(max(844 + 0.12 * t - 1.55e7 / t**2, 700.0), 1050.0)
            f.write(f"{t:.6g},{cp:.8g}\n")


if __name__ == "__main__":
    write_si()
    write_au()
    write_cp()
