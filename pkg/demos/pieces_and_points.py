"""Pieces and points of small reflexive graphs."""

from cohesio.cohesion import CohesionContext, codiscrete, discrete, kappa, pieces, points, theta
from cohesio.fincat import builtin_site, classify_site
from cohesio.presheaf import coproduct, exponential, yoneda

C = builtin_site("delta1")  # reflexive graphs
print(classify_site(C).as_dict())

ctx = CohesionContext(C)
I = yoneda(C, "[1]")  # the walking edge
two, _, _ = coproduct(yoneda(C, "[0]"), yoneda(C, "[0]"))

for label, X in [("edge", I), ("two vertices", two), ("codiscrete 3", codiscrete(ctx, 3))]:
    th = theta(ctx, X)
    print(f"{label:14} sections {X.sizes}  points {len(points(ctx, X))}  pieces {pieces(ctx, X).count}"
          f"  theta {th.table}")

# every piece has a point, so theta is onto; it is not injective on the edge
assert theta(ctx, I).surjective and not theta(ctx, I).injective

# endomaps of the edge form a connected object, and pieces commute with it
E = exponential(I, I).presheaf
print("I^I sections", E.sizes, "pieces", pieces(ctx, E).count)
print("kappa(I, I) iso:", kappa(ctx, I, I).iso)
print("kappa(2, I) iso:", kappa(ctx, discrete(ctx, 2), I).iso)
