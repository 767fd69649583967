"""Small Mushroom sweep: cost-aware feature selection versus forced-size greedy."""

from dsmin.featsel import run_experiment

config = {
    "dataset": "mushroom",
    "algorithms": ["GrF", "SupSub", "ModMod"],
    "lambdas": [0.001, 0.01],
    "cost": {"kind": "modular"},
    "budgets": "matched",
}
for row in run_experiment(config):
    print(f"{row['algorithm']:7s} lambda={row['lambda'] or '-':6s} budget={row['budget'] or '-':3s} "
          f"|A|={row['set_size']:3d} accuracy={row['accuracy']}")
