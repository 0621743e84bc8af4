"""Tabulate e f^(k+1) v+ at the odd node of B1_0_1 against two closed forms.

Columns: label, k, whether the coefficient vanishes, agreement with the
prefactor (q^((k+1)/2) - q^(-(k+1)/2)) / ((q - q^-1)(q^(1/2) - q^(-1/2))),
agreement with the re-derived form, and the coefficient itself.
"""

from __future__ import annotations

from fractions import Fraction

from qaffine.cartan import catalog
from qaffine.scalars import qpow, render
from qaffine.verma import HighestWeightModule, odd_string_closed_form


def minus_prefactor_form(lam, k):
    q = qpow
    s = -1 if k % 2 else 1
    half = Fraction(k + 1, 2)
    pref = (q(half) - q(-half)) / ((q(1) - q(-1)) * (q(Fraction(1, 2)) - q(Fraction(-1, 2))))
    return pref * (q(lam - Fraction(k, 2)) - q(Fraction(k, 2) - lam) * s)


def main() -> None:
    data = catalog("B1_0_1")
    print("label  k  zero  minus-prefactor  rederived  coefficient")
    for label in range(5):
        m = HighestWeightModule(data, (0, label))
        lam = m._lam_pair[1]
        for k in range(5):
            c = m.string_coefficient(1, k + 1)
            print(f"{label:5d} {k:2d}  {str(not c):5s} {str(c == minus_prefactor_form(lam, k)):16s} "
                  f"{str(c == odd_string_closed_form(lam, k)):10s} {render(c)}")


if __name__ == "__main__":
    main()
