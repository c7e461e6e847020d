"""Distances, navigability and horn filling on 2-truncated simplicial sets."""

from cohesio.cohesion import CohesionContext, codiscrete
from cohesio.fincat import builtin_site
from cohesio.homotopy import distance_report, is_kan, is_navigable, standard_connector
from cohesio.samples import group_nerve, path_graph

C = builtin_site("delta:2")
ctx = CohesionContext(C)
conn = standard_connector(ctx)

corpus = [(f"path {n}", path_graph(C, n)) for n in range(1, 5)]
corpus += [("codiscrete 3", codiscrete(ctx, 3)), ("nerve Z/2", group_nerve(C, 2)), ("nerve Z/3", group_nerve(C, 3))]

print(f"{'object':14} {'bound':>5} {'navigable':>9} {'kan':>5}")
for label, X in corpus:
    bound = distance_report(ctx, conn, X).bound
    nav = is_navigable(ctx, conn, X).navigable
    kan = is_kan(X)
    print(f"{label:14} {bound:>5} {str(nav):>9} {str(kan.kan):>5}")

# a path reaches its far end in n steps but cannot walk back along one edge
res = is_kan(path_graph(C, 1))
print("unfillable horn of the walking edge:", res.failing_horn)
