# coding: utf-8

# # Clifford modules and the spinor rule table
#
# Build the gamma matrices, look at how a skew form acts on spinors,
# and let the rewriting engine compute D and D^2 symbolically.

# In[1]:

from fractions import Fraction as F

import numpy as np

from flowdirac.clifford import SkewForm, build_rep, omega_eigendecomposition
from flowdirac.spinor_calculus import DerivativeRuleTable, SpinorExpr, dirac, run_trials


# Generators square to -1 and are skew-Hermitian.

# In[2]:

rep = build_rep(5)
g = [np.array(x.to_complex()) for x in rep.gammas]
print(rep.spinor_dim, [np.allclose(x @ x, -np.eye(rep.spinor_dim)) for x in g])


# The complex structure J on the transverse directions splits the spinor
# module into eigenspaces with binomial multiplicities.

# In[3]:

for s in omega_eigendecomposition(build_rep(7), SkewForm.complex_structure(3)):
    print(s.r, s.eigenvalue, s.multiplicity)


# # Symbolic D and D^2
#
# alpha = 1/2, beta = 1/3 on a 5-dimensional flow with Omega = J.

# In[4]:

rules = DerivativeRuleTable(F(1, 2), F(1, 3), SkewForm.complex_structure(2))
psi = SpinorExpr.psi()
print("D psi   =", dirac(psi, rules))
print("D^2 psi =", dirac(dirac(psi, rules), rules))


# Random exact trials compare the rewriting result to the closed forms.

# In[5]:

summary = run_trials("dirac2", 4, 25, seed=7)
print(summary["passed"], summary["failures"], summary["formal"])
