# coding: utf-8

# # Spectra of D^2 on flat and Heisenberg-type models
#
# Flat tori and Bieberbach manifolds have explicit spectra; we compare
# the closed-form families with brute-force lattice enumeration.

# In[1]:

from fractions import Fraction as F

import numpy as np

from flowdirac.models import ModelInstance, dirac_square_spectrum, lambda1, torus_fourier_oracle


# A torus in units of pi with a nontrivial spin structure along the first axis.

# In[2]:

basis = [[1, 0, 0], [0, F(1, 2), 0], [0, 0, 1]]
torus = ModelInstance("Torus", {"basis": basis, "length_unit": "pi"}, (1, 0, 0))
sl = dirac_square_spectrum(torus, 12)
for q, mult in zip(sl.quantities(), sl.multiplicities()):
    print(q, mult)


# The dual lattice oracle agrees value by value.

# In[3]:

oracle = torus_fourier_oracle(basis, (1, 0, 0), 12, "pi")
print(sl.flat_values() == oracle.flat_values())


# # Bieberbach manifolds
#
# lambda_1 as the height H varies, for the G3 family with delta_1 = 1.

# In[4]:

Hs = np.linspace(0.5, 3.0, 6)
for H in Hs:
    m = ModelInstance("Bieberbach", {"i": 3, "H": F(H).limit_denominator(100), "L": 1, "length_unit": "pi"}, (1, 0, 0))
    lam = lambda1(m)
    print(f"H={H:.2f}  lambda_1={lam.value}  from {lam.source}")
