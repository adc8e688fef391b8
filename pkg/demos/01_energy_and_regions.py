#!/usr/bin/env python3
"""Tour of the relaxed membrane energy and its four regimes.

A nematic elastomer membrane relaxes its energy through wrinkling and
director microstructure.  The effective energy depends on the 3x2
deformation gradient only through two invariants: the largest principal
stretch lamM and the areal stretch delta.  The invariant plane splits
into four regimes:

  L  liquid          energy (and stress) relax to zero
  W  wrinkling       out-of-plane oscillation, uniaxial tension
  M  microstructure  in-plane director stripes, equi-biaxial tension
  S  solid           no fine-scale features

Run:  python demos/01_energy_and_regions.py
"""

import numpy as np

from nemem import MaterialParams, classify, diag_embed, plane_energy, psi, relaxed_energy

params = MaterialParams(mu=2.0, r=8.0)
print(f"material: mu = {params.mu}, r = {params.r}")
print(f"spontaneous stretch r^(1/3) = {params.r ** (1 / 3):.4f}, "
      f"transverse r^(-1/6) = {params.r ** (-1 / 6):.4f}\n")

print("pointwise evaluations (lamM, delta) -> region, relaxed energy:")
for lam, dlt in [(1.5, 1.0), (1.6, 2.0), (3.0, 1.0), (2.5, 2.0)]:
    region = classify(lam, dlt, params)
    print(f"  ({lam:4.2f}, {dlt:4.2f})  {region.value}   {psi(lam, dlt, params):.8f}")

print("\nthe same through matrices (diagonal realizations):")
for lam, dlt in [(1.5, 1.0), (3.0, 1.0)]:
    F = diag_embed(lam, dlt / lam)
    ev = relaxed_energy(F, params)
    print(f"  diag({lam}, {dlt / lam:.4f}) -> region {ev.region.value}, "
          f"energy {ev.energy:.8f}")

print("\nrelaxation gap: unrelaxed plane energy vs relaxed energy")
F = diag_embed(1.0, 1.0)
print(f"  undeformed membrane: plane energy {plane_energy(F, params):.8f}, "
      f"relaxed {relaxed_energy(F, params).energy:.8f}")
print("  (an unstretched nematic membrane can reach zero energy by "
      "wrinkling into its spontaneous shape)")

print("\ncoarse region map (rows: delta descending, cols: lamM):")
lams = np.linspace(0.25, 4.0, 16)
dlts = np.linspace(0.25, 4.0, 16)
for dlt in dlts[::-1]:
    row = "".join(
        classify(lam, dlt, params).value if dlt <= lam * lam else "."
        for lam in lams
    )
    print(f"  {dlt:5.2f}  {row}")
print("         " + "".join("-" for _ in lams))
print("         lamM from 0.25 to 4.0 ('.' = unrealizable)")
