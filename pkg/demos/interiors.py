"""Interior points of simplices and cubes, and realized points of a simplicial set."""

from fractions import Fraction as Q

from cohesio.fincat import builtin_site
from cohesio.presheaf import yoneda
from cohesio.realization import (
    brute_force_interior,
    cube_spec,
    endpoints_spec,
    interior_membership,
    realize_report,
    simplex_spec,
    surjectivity_certificate,
)

s2 = simplex_spec(2)
for p in [(Q(1, 3), Q(2, 3)), (Q(0), Q(1, 2)), (Q(1, 2), Q(1, 2))]:
    fast = interior_membership(s2, "[2]", p)
    slow = brute_force_interior(s2, "[2]", p)
    print("simplex", [str(v) for v in p], fast, slow)

c2 = cube_spec(2)
for p in [(Q(1, 4), Q(1, 3)), (Q(1, 4), Q(1, 4))]:
    print("cube   ", [str(v) for v in p], interior_membership(c2, "[0,1]^2", p))

print(surjectivity_certificate(simplex_spec(3)))
# the two endpoints of an interval are both hit by point inclusions
print(surjectivity_certificate(endpoints_spec()))

Y = yoneda(builtin_site("delta:2"), "[1]")
edge = Y.names[1].index("[1]->[1]:01")
degenerate = Y.names[1].index("[1]->[1]:11")
for x, t in [(edge, Q(1, 2)), (edge, Q(1)), (degenerate, Q(1, 2))]:
    print(Y.names[1][x], t, "->", realize_report(Y, 1, x, (t,)))
