# %% [markdown]
"""
Raw permutation census and affine solutions
===========================================

On a 2- or 3-element set every permutation of X x X can be checked. The
linear solutions sit inside the census; the rest are non-linear.
"""

# %%
from ybx import GroupSpec, enumerate_set_theoretic
from ybx.hunt import cross_validate
from ybx.kernel import (AffineSolution, complete_affine, to_permutation, verify_qybe_set,
                        verify_set, verify_unitarity_set)
from ybx.modmat import Matrix

for n in (2, 3):
    for checks in (("qybe", "unitarity"), ("qybe", "unitarity", "crossing")):
        c = enumerate_set_theoretic(n, checks)
        print(f"n={n} {'+'.join(checks)}: {c.count_raw} raw, "
              f"{c.count_canonical} up to relabeling")

# %%
print(cross_validate(3, 1).to_json())

# %% [markdown]
"""
Affine solutions: the translation t is determined by z. Moving t off that
value is caught by unitarity; the QYBE alone does not always notice (for
a = 0, b = 1 the map is a pure translation).
"""

# %%
g = GroupSpec(3, 1)
aff = complete_affine(g, Matrix.zeros(1, ring=g.ring), Matrix.identity(1, g.ring), (1,))
print("z, t =", aff.z, aff.t, verify_set(to_permutation(aff)).ok)
moved = AffineSolution(aff.linear, aff.z, ((aff.t[0] + 1) % 3,))
R = to_permutation(moved)
print("moved t: QYBE", verify_qybe_set(R).status, "| unitarity", verify_unitarity_set(R).status)
