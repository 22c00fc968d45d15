#!/usr/bin/env python3
"""Regenerate src/mesozeta/_psi_taylor_data.py.

Computes Taylor coefficients of the entire function

    Psi(p) = cos(2*pi*(p^2 - p - 1/16)) / cos(2*pi*p)

about the sixteenths of [0, 1] (excluding the removable-singularity points
1/4 and 3/4) at 50-digit working precision, then prints a Python module with
the coefficients rounded to double.  Requires mpmath (test extra).

Usage:  python tools/gen_psi_taylor.py > src/mesozeta/_psi_taylor_data.py
(then re-add the module docstring by hand or from git).
"""
import mpmath

mpmath.mp.dps = 50
ORDER = 40


def psi(z):
    return mpmath.cos(2 * mpmath.pi * (z * z - z - mpmath.mpf(1) / 16)) / mpmath.cos(2 * mpmath.pi * z)


def main():
    bases = [mpmath.mpf(k) / 16 for k in range(17) if k not in (4, 12)]
    print("import numpy as np")
    print()
    print("BASES = np.array([")
    for b in bases:
        print(f"    {float(b)!r},")
    print("])")
    print()
    print("COEFFS = np.array([")
    for b in bases:
        coeffs = mpmath.taylor(psi, b, ORDER)
        row = ", ".join(repr(float(c)) for c in coeffs)
        print(f"    [{row}],")
    print("])")


if __name__ == "__main__":
    main()
