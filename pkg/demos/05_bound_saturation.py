# %% [markdown]
# Saturating the power bound.
#
# For a pure state, pointing the battery Hamiltonian along the top
# eigenvector of gammaC and using the optimal driving makes |P| equal to
# sqrt(2 kappa Gamma_C g <dV^2>) exactly. Mixed states saturate it as well
# once kappa (now above 1) is included: the price of mixedness sits in kappa.

# %%
from qbattery import HilbertSpec, commutation_matrix, commutation_matrix_pure, hamiltonian_from_direction
from qbattery import optimal_driving, power_bound
from qbattery.states import random_density, random_pure

spec = HilbertSpec((3, 3))

# %% pure states
for seed in range(5):
    psi = random_pure(spec, seed)
    H = hamiltonian_from_direction(spec, commutation_matrix_pure(psi).top_vector)
    r = power_bound(psi, H, optimal_driving(psi, H))
    print(f"pure  seed {seed}: Gamma_C {r.gamma_c:.4f}  P {r.power:.6f}  bound {r.bound:.6f}  "
          f"ratio {r.ratio:.12f}  kappa {r.kappa:.3f}")

# %% mixed states
for seed in range(5):
    rho = random_density(spec, 3, seed)
    H = hamiltonian_from_direction(spec, commutation_matrix(rho).top_vector)
    r = power_bound(rho, H, optimal_driving(rho, H))
    print(f"mixed seed {seed}: Gamma_C {r.gamma_c:.4f}  ratio {r.ratio:.4f}  kappa {r.kappa:.3f}  "
          f"cos_V {r.cos_theta_V:.6f}  cos_H {r.cos_theta_H:.4f}")
