# Random inspection field in the unit square with depots near the corners.
# Small enough that the exact solver can tell us how far off the planner is.

import numpy as np

from rootedcover import exact_solve, solve, validate_cover
from rootedcover.bench import geometric_instance
from rootedcover.cyclegen import cover_to_dot

ratios = []
for seed in range(20):
    inst = geometric_instance(9, 2, 3, epsilon=0.25, seed=seed)
    sol = solve(inst)
    assert not validate_cover(sol.cover, inst)
    ratios.append(sol.objective / exact_solve(inst).lambda_star)
ratios = np.array(ratios)
print("ratio to optimum: mean %.3f  max %.3f" % (ratios.mean(), ratios.max()))

# larger field, no oracle, just the planner
inst = geometric_instance(300, 4, 12, seed=1)
sol = solve(inst)
print(len(sol.cover), "cycles, longest", round(sol.objective, 3))
print("candidate", sol.candidate_id, "of", sol.stats["candidates"], "-", sol.stats["iterations"], "search steps")
lengths = sorted(round(c.weight, 3) for c in sol.cover)
print(lengths)

with open("field.dot", "w") as fh:
    fh.write(cover_to_dot(sol.cover, inst))
