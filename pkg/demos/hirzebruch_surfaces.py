# # Hirzebruch surfaces as height-two Bott towers
#
# A height-two tower has a single entry beta_12; beta_12 = -n gives the
# Hirzebruch surface H_n. This walks through rays, walls, the one
# interesting primitive relation, and the nef cone.

# %%
from fractions import Fraction

from bottkit import BottMatrix, Divisor, RayId, PLUS, MINUS
from bottkit.fan import build_rays, enumerate_walls, wall_curve_class
from bottkit.relations import all_relations
from bottkit.divisors import nef_generators, relation_degrees, to_plus_basis
from bottkit.classify import classify_fano

# %% [markdown]
# ## Rays and walls of H_1

# %%
H1 = BottMatrix.hirzebruch(1)
for ray in build_rays(H1):
    print(ray.id.vector_name, ray.coords)

# four maximal cones, four walls; each wall carries a curve class
for w in enumerate_walls(H1):
    print(w, "->", wall_curve_class(H1, w))

# %% [markdown]
# ## Primitive relations and the Mori cone
#
# Only the first pair is interesting: e_1^+ + e_1^- equals n e_2^+.

# %%
for n in range(0, 4):
    M = BottMatrix.hirzebruch(n)
    rels = all_relations(M)
    print(f"H_{n}:", rels[0], "|", classify_fano(M).label)

# %% [markdown]
# ## Nef cone
#
# Generators in the plus basis: D_1+ and D_1+ + D_2+, and the second one is
# linearly equivalent to D_2-.

# %%
gens = nef_generators(H1)
print("nef generators:", [str(g) for g in gens])
print("D_2- in the plus basis:", to_plus_basis(H1, Divisor.from_map(2, {RayId(2, MINUS): 1})))

# a D_1+ + b D_2- is ample exactly when a > 0 and b > 0
for a, b in [(1, 1), (1, 0), (2, -1), (Fraction(1, 2), 3)]:
    D = Divisor.from_map(2, {RayId(1, PLUS): a, RayId(2, MINUS): b})
    print(f"a={a}, b={b}: ample={relation_degrees(H1, D).is_ample}")
