# %% [markdown]
# W states and k-local entanglement.
#
# For the N-qubit W state Gamma_C = (3N - 2)/N, which approaches 3 but
# never reaches N. A product of independent k-cell blocks cannot beat the
# best block.

# %%
from qbattery import gamma_c
from qbattery.checks import w_table
from qbattery.states import ghz_two_qudit, k_local_compose, product_state, w_state

# %%
print(" N   Gamma_C(W_N)        (3N-2)/N")
for N, g, f, diff in w_table(10):
    print(f"{N:2d}   {g:.15f}   {f:.15f}   diff {diff:.1e}")

# %% k-local: blocks of size <= k cap Gamma_C at k
blocks = [ghz_two_qudit(2), w_state(3), product_state([0])]
psi = k_local_compose(blocks)
print("block values:", [round(gamma_c(b), 6) for b in blocks])
print("composite   :", round(gamma_c(psi), 6), "(6 qubits, largest block 3)")
