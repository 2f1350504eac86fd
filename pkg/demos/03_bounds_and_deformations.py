# coding: utf-8

# # Upper and lower bounds, and where they meet
#
# equality_report puts lambda_1 next to each available bound and flags
# the ones that are attained.

# In[1]:

from fractions import Fraction as F

import numpy as np

from flowdirac.estimates import SIGMA0, deformed_eigenvalue, equality_report, harmonic_t
from flowdirac.models import catalog


# In[2]:

for entry in catalog():
    if entry.capability == "none":
        continue
    r = equality_report(entry.model)
    sharp = [k for k in ("dim3", "sasakian", "remark", "friedrich", "hijazi") if r.flags.get(k) is True]
    print(f"{entry.name:<18} lambda_1={str(r.lambda1):<12} sharp: {', '.join(sharp) or '-'}")


# # D-homothetic deformations of a Sasakian sphere
#
# The smallest eigenvalue as a function of t. It reaches zero at the
# harmonic value when the sign condition on alpha holds.

# In[3]:

m, alpha = 2, F(3, 2)
ts = np.linspace(0.25, 4, 16)
vals = [float(deformed_eigenvalue(m, alpha, F(t).limit_denominator(1000), SIGMA0)) for t in ts]
print(np.round(vals, 4))
print("harmonic t:", harmonic_t(m, alpha, SIGMA0))
