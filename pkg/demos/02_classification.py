# %% [markdown]
"""
Classifying solutions over Z/p
==============================

For N < p every a that pairs with some invertible b is nilpotent, and its
conjugacy class is fixed by its Jordan type. Counting the enumeration by
Jordan type shows where solutions come from.
"""

# %%
from collections import Counter

from ybx import Matrix, Ring, enumerate_linear, jordan_type, nilpotency_index
from ybx.canon import NotNilpotent, classify, probe_prop5

for p in (3, 5):
    pairs = enumerate_linear(p, 2)
    types = Counter(tuple(jordan_type(a)) for a, _ in pairs)
    print(f"Z/{p}, N = 2: {len(pairs)} pairs, by Jordan type of a: {dict(types)}")

# %% [markdown]
"""
With N >= p other solutions appear. Over Z/2 with N = 2 there are
non-nilpotent a.
"""

# %%
odd = []
for a, b in enumerate_linear(2, 2):
    try:
        nilpotency_index(a)
    except NotNilpotent:
        odd.append((a.tolist(), b.tolist()))
print(len(odd), "non-nilpotent pairs, e.g.", odd[0])

R2 = Ring(2)
print(classify(Matrix.of([[1, 1], [1, 0]], R2), Matrix.of([[0, 1], [1, 0]], R2)))

# %% [markdown]
"""
Over the integers, a nilpotent a need not be conjugate to a sum of shift
blocks: [[0, 2], [0, 0]] pairs with b = 1, but the gcd of its entries (2)
is a conjugation invariant that differs from that of J_2 (1).
"""

# %%
print(probe_prop5(Matrix.of([[0, 2], [0, 0]]), Matrix.identity(2)))
