# Four stops on a line, depots at both ends, two robots.
# Walks through every stage of the planner on a case small enough to check by hand.

import numpy as np

from rootedcover import exact_solve, line_instance, solve
from rootedcover.cyclegen import cover_from_forest
from rootedcover.decompose import decompose_forest
from rootedcover.planner import prepare, search_candidate

inst = line_instance([0, 1, 2, 3], depots=[0, 3], k=2)
print(inst.w)

fstar, conn, cands = prepare(inst)
for t in fstar:
    print("tree rooted at", t.root, sorted(t.vertices), "weight", t.weight)
print("connectors:", list(conn))

# one candidate per subset of connectors
for c in cands:
    print("candidate", c.candidate_id, [sorted(t.vertices) for t in c.forest])

# the merged tree is light enough at lam=2, but not at lam=1
whole = cands[1]
print([sorted(t.vertices) for t in decompose_forest(whole, 2.0)])
print([sorted(t.vertices) for t in decompose_forest(whole, 1.0)])
print([c.route for c in cover_from_forest(decompose_forest(whole, 2.0), inst)])

cover, trace = search_candidate(cands[0], inst)
for it in trace.iterations[:4]:
    print(f"ell={it.ell} a={it.a:g} b={it.b:g} lam={it.lam:g} trees={it.tree_count} feasible={it.feasible}")

sol = solve(inst)
best = exact_solve(inst)
print("routes", [c.route for c in sol.cover])
print("objective", sol.objective, "optimum", best.lambda_star, "ratio", sol.objective / best.lambda_star)
