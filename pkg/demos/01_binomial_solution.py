# %% [markdown]
"""
Building a solution from the shift and binomial matrices
========================================================

The pair a = J_N (ones on the superdiagonal), b = B_N (binomial
coefficients C(j, i)) satisfies ab = ba + aba over the integers, so it
gives a linear R-matrix on X = (Z/m)^N for every modulus m.
"""

# %%
from ybx import (GroupSpec, Ring, binomial_matrix, check_eq13, complete_solution,
                 shift_matrix, to_permutation, verify_crossing_linear,
                 verify_crossing_matrix, verify_qybe_set, verify_unitarity_set)
from ybx.formats import dumps, format_table, solution_to_json

J, B = shift_matrix(4), binomial_matrix(4)
print(B.tolist())
print("ab = ba + aba over Z:", check_eq13(J, B))

# %% [markdown]
"""
Completing (a, b) fills in c = b^-1 (1 - a^2) and d = a (a - 1)^-1.
Here over Z/5 with N = 2.
"""

# %%
g = GroupSpec(5, 2)
sol = complete_solution(g, shift_matrix(2, g.ring), binomial_matrix(2, g.ring))
print(dumps(solution_to_json(sol)))

# %% [markdown]
"""
The set-level checks work on the explicit permutation of X x X
(625 pairs here) and do not look at a, b, c, d at all.
"""

# %%
R = to_permutation(sol)
print("QYBE:", verify_qybe_set(R).status)
print("unitarity:", verify_unitarity_set(R).status)
print("crossing (matrix):", verify_crossing_matrix(R).status)
print("crossing (conditions 1-2):", verify_crossing_linear(sol).status)

# %%
print(format_table(R).splitlines()[:5])
