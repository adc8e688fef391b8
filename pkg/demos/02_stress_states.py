#!/usr/bin/env python3
"""Effective stress of the membrane: tension only, region by region.

The membrane cannot sustain compression: wrinkling and director
microstructure relax any compressive branch away.  The result is zero
stress in L, uniaxial tension in W, equi-biaxial tension in M (shear
strain without shear stress!), and general biaxial tension in S.

Run:  python demos/02_stress_states.py
"""

import numpy as np

from nemem import MaterialParams, diag_embed, membrane_stress, relaxed_energy_grad_fd

params = MaterialParams(mu=2.0, r=8.0)

cases = [
    ("L (liquid)", diag_embed(1.5, 1.0 / 1.5)),
    ("M (microstructure)", diag_embed(1.6, 1.25)),
    ("W (wrinkling)", diag_embed(3.0, 1.0 / 3.0)),
    ("S (solid)", diag_embed(2.5, 0.8)),
]

for label, F in cases:
    st = membrane_stress(F, params)
    s1, s2 = st.principal_values
    print(f"{label:22s} classification: {st.classification:12s} "
          f"principal stresses: ({s1:.6f}, {s2:.6f})")

print("\nshear strain without shear stress (region M):")
F = diag_embed(1.6, 1.25)  # unequal principal stretches
st = membrane_stress(F, params)
print(f"  principal stretches (1.6, 1.25) differ, yet the stress is "
      f"{st.classification}: sigma1 = sigma2 = {st.principal_values[0]:.6f}")

print("\nthe stress is the energy gradient contracted with F^T "
      "(finite-difference check):")
for label, F in cases[1:]:
    g = relaxed_energy_grad_fd(F, params)
    sigma_fd = g @ F.T
    sigma = membrane_stress(F, params).sigma
    err = np.linalg.norm(sigma_fd - sigma) / max(1.0, np.linalg.norm(sigma))
    print(f"  {label:22s} rel deviation {err:.2e}")

print("\nplane stress: the deformed normal is stress-free:")
F = diag_embed(2.5, 0.8)
st = membrane_stress(F, params)
normal = np.cross(st.principal_dirs[0], st.principal_dirs[1])
print(f"  |sigma . n| = {np.linalg.norm(st.sigma @ normal):.2e}")
