"""
A small verification campaign
=============================

The ``verify`` command sweeps families, dimensions, random simplices and
function catalogs, then aggregates the verdicts. The same run is available
from the shell as ``hhbounds verify --config campaign.json``.
"""

from hhbounds.cli import CampaignConfig, aggregate, run_campaign

config = CampaignConfig(
    families=["classical", "wright", "operator"],
    dimensions=[1, 2, 3],
    simplices_per_dim=5,
    function_catalog=[{"catalog": "convex"}, {"catalog": "wright"}, {"catalog": "control"}],
    mc_samples=5_000,
    seed=11,
)
result = run_campaign(config)
agg = result["aggregate"]
for group in ("positive", "controls"):
    g = agg[group]
    print(f"{group:9s} total {g['total']:4d}  holds {g['holds']:4d}  "
          f"violated {g['violated']:4d}  inconclusive {g['inconclusive']:4d}")

# the cases that could not be decided all come from Monte Carlo middles
undecided = [c for c in result["cases"] if c["status"] == "inconclusive"]
print({c["middle"]["kind"] for c in undecided} or "none undecided")
assert aggregate(result["cases"]) == agg
