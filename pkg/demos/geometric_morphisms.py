"""The geometric morphism induced by the inclusion of reflexive graphs into 2-truncated simplicial sets."""

import random

from cohesio.fincat import builtin_site
from cohesio.morphisms import (
    collapse_functor,
    hurewicz_adjunction_check,
    inclusion_functor,
    induce_gm,
    lam,
    pieces_preservation_report,
)
from cohesio.presheaf import terminal, yoneda
from cohesio.samples import random_presheaf

C, D = builtin_site("delta1"), builtin_site("delta:2")
gm = induce_gm(inclusion_functor(C, D))

# restriction of the 2-simplex: three vertices, six edges
print("g^* y[2] sections", gm.inverse(yoneda(D, "[2]")).sizes)

rng = random.Random(1)
tests = [random_presheaf(C, rng, max_per_degree=3) for _ in range(10)]
rep = pieces_preservation_report(gm, tests)
print("preserves pieces on the test family:", rep.preserves_pieces)
print({k: v for k, v in rep.as_dict().items() if isinstance(v, bool)})

# collapsing to a point identifies lambda with theta, which is not injective on an edge
collapse = induce_gm(collapse_functor(C, builtin_site("terminal")))
print("collapse lambda on the edge:", lam(collapse, yoneda(C, "[1]")))

out = hurewicz_adjunction_check(gm, yoneda(D, "[1]"), terminal(C))
print("H(g^*E, X) vs H(E, g_*X):", out["size_domain_side"], out["size_codomain_side"], out["bijection"])
