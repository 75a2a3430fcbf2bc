# %% [markdown]
# Commutation matrix of a few two-cell states.
#
# Gamma_C is the top eigenvalue of gammaC_mn = -tr([M_m, S][M_n, S]),
# S = sqrt(rho). Separable states stay at or below 1; entanglement can
# push it up to the number of cells.

# %%
import numpy as np

from qbattery import DensityMatrix, HilbertSpec, commutation_matrix, covariance_matrix, gamma_c
from qbattery.states import ghz_two_qudit, product_state, qutrit_final, qutrit_initial, random_separable

# %% product vs Bell
print("product |00>       Gamma_C =", round(gamma_c(product_state([0, 0])), 12))
print("Bell (|00>+|11>)   Gamma_C =", round(gamma_c(ghz_two_qudit(2)), 12))

# %% generalized GHZ on two qudits: 4/D, below 1 once D > 4
for D in range(2, 9):
    print(f"GHZ D={D}: Gamma_C = {gamma_c(ghz_two_qudit(D)):.12f}   4/D = {4 / D:.12f}")

# %% more entanglement does not mean more advantage
# The qutrit GHZ state is maximally entangled, yet dropping the middle level
# (less entanglement) raises Gamma_C from 4/3 to 2.
print("qutrit GHZ          ", gamma_c(qutrit_initial()))
print("(|00> + |22>)/sqrt2 ", gamma_c(qutrit_final()))

# %% classical correlations inflate the covariance matrix, not gammaC
rho = DensityMatrix(np.diag([0.5, 0, 0, 0.5]), HilbertSpec((2, 2)))
print("||gamma||  =", covariance_matrix(rho).norm)
print("Gamma_C    =", commutation_matrix(rho).norm)

# %% random separable mixtures
vals = [gamma_c(random_separable(HilbertSpec((3, 3)), 4, s)) for s in range(50)]
print(f"50 separable two-qutrit mixtures: max Gamma_C = {max(vals):.6f}")
