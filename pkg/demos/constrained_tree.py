"""ModMod restricted to spanning trees of the complete graph on five vertices."""

import numpy as np

from dsmin import DSFunction
from dsmin.constraints import SpanningTree, constrained_mod_mod
from dsmin.core import ConcaveModular, ModularFunction, members

edges = [(u, v) for u in range(5) for v in range(u + 1, 5)]
rng = np.random.default_rng(0)
length = ModularFunction(rng.uniform(1, 3, len(edges)))
# concave reward for using many edges that share a "provider"
provider = ConcaveModular(rng.uniform(0, 2, len(edges)), phi="sqrt")

ds = DSFunction(length, provider)
tree = SpanningTree(edges)
tr = constrained_mod_mod(ds, tree)
print("edges:", [edges[j] for j in members(tr.set)])
print(f"value {tr.value:.4f} after {tr.accepted_steps} steps, feasible={tree.is_feasible(tr.set)}")
