# # A seven-stage tower end to end
#
# The matrix lives in tests/fixtures/m7.mat. We run the pivot reduction,
# read off the Mori and nef cones, and then let the wall oracle
# (448 walls) confirm everything independently.

# %%
from pathlib import Path

from bottkit import read_matrix
from bottkit.relations import all_relations, format_relation_table, reduction_trace, relation_cones
from bottkit.divisors import nef_generators, nef_recursion
from bottkit.classify import classify_fano, oracle_cross_check, ray_types

M = read_matrix(Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "m7.mat")
print(M)

# %% [markdown]
# ## Reduction for row 1
#
# The pivots are the indices whose e_j^+ got traded for e_j^-.

# %%
trace, _ = reduction_trace(M, 1)
print("pivots:", trace.pivots)
print("a-table:", {k: v for k, v in sorted(trace.a_table.items()) if k[0] > 1})
first, second = relation_cones(M, 1)
print("cones:", [str(x) for x in first], [str(x) for x in second])

# %% [markdown]
# ## All primitive relations

# %%
rels = all_relations(M)
print(format_relation_table(rels))

# %% [markdown]
# ## Nef generators, built recursively

# %%
for m, (D, rec) in enumerate(zip(nef_generators(M, rels), nef_recursion(M, rels)), start=1):
    print(f"D_{m} = " + " + ".join([f"D_{k}" for k, _ in rec] + [f"D_{{{m}+}}"]), "=", D)

# %%
print(classify_fano(M, rels).label)
for t in ray_types(M, rels):
    print(f"r(P_{t.i}): K.r = {t.canonical_degree:>2}  {'Mori' if t.is_mori else ''}")

# %% [markdown]
# ## Brute force agrees

# %%
chk = oracle_cross_check(M)
print(chk.n_walls, "walls,", len(chk.oracle_classes), "classes, mismatches:", chk.mismatches)
