"""Minimize a random DS function with each procedure and compare to brute force."""

from dsmin import DSFunction, minimize, random_submodular
from dsmin.core import brute_force_minimize, format_set
from dsmin.decomp import lower_bound_1, lower_bound_2

n = 10
ds = DSFunction(random_submodular(n, seed=1), random_submodular(n, seed=2))

best_set, best = brute_force_minimize(ds.as_function())
print(f"exhaustive minimum {best:.4f} at {format_set(best_set)}")
print(f"lower bounds       {lower_bound_1(ds):.4f}, {lower_bound_2(ds):.4f}")

for alg in ("subsup", "supsub", "modmod"):
    tr = minimize(ds, alg)
    print(f"{alg:7s} value {tr.value:.4f} at {format_set(tr.set)} "
          f"after {tr.accepted_steps} steps ({tr.certificate})")
