"""A shrunken policy sweep, end to end: grid, aggregates, front, best picks.

The full protocol runs half a million generations on 2000-node networks; this
uses the same machinery at toy scale so the whole pipeline finishes in
seconds. Artifacts land in demos/output/.
"""

from pathlib import Path

from fairnet.interference import Scheme, TargetSet
from fairnet.netgen import GenParams
from fairnet.sweep import (
    AGGREGATE_COLUMNS,
    GridSpec,
    PARETO_COLUMNS,
    SweepSpec,
    aggregate_row,
    best_per_fairness,
    pareto_front,
    pareto_points_from_aggregate_rows,
    pareto_row,
    run_sweep,
    write_csv,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

spec = SweepSpec(
    network=GenParams(model="ba", n=200, m=2),
    network_seeds=(0, 1),
    generations=10_000,
    window=1_000,
    replicates=2,
    master_seed=0,
    grid=GridSpec(
        schemes=(Scheme.POP, Scheme.NEB),
        targets=(TargetSet.FAIR_RESPONDERS,),
        thresholds=(0.3, 0.7),
        ni_thresholds=(0.01,),
        thetas=(10.0, 56.23),
    ),
)

points = sum(1 for _ in spec.grid.points())
runs = points * len(spec.network_seeds) * spec.replicates
print(f"sweeping {points} grid points x {len(spec.network_seeds)} networks x "
      f"{spec.replicates} replicates = {runs} runs")

outcome = run_sweep(spec, jobs=2)
assert not outcome.failures, outcome.failures

agg_rows = [aggregate_row(spec, cfg, agg) for cfg, agg in outcome.aggregates]
write_csv(OUT / "aggregates.csv", AGGREGATE_COLUMNS, agg_rows)

print()
print("scheme  threshold  theta  mean_fairness  mean_cost")
for cfg, agg in outcome.aggregates:
    print(
        f"{cfg.scheme.value:>6}  {cfg.threshold:9.3g}  {cfg.endowment:5.4g}"
        f"  {agg.mean_fairness:13.4f}  {agg.mean_cost:9.2f}"
    )

# The front is computed from the CSV rows rather than the in-memory objects,
# the same path the command line uses, so the demo doubles as a smoke test
# of the round trip.
as_dicts = [dict(zip(AGGREGATE_COLUMNS, row)) for row in agg_rows]
front = pareto_front(pareto_points_from_aggregate_rows(as_dicts))
write_csv(OUT / "pareto.csv", PARETO_COLUMNS, [pareto_row(p) for p in front])

print()
print(f"pareto front: {len(front)} of {len(agg_rows)} points")
for p in front:
    coords = dict(p.coords)
    print(f"  unfair {p.unfair:.4f}  cost {p.mean_cost:9.2f}  "
          f"({coords['scheme']} thr {coords['threshold']} theta {coords['theta']})")

print()
for level, cfg, agg in best_per_fairness(outcome.aggregates, levels=(0.75, 0.9)):
    print(
        f"cheapest policy with mean fairness >= {level}: {cfg.scheme.value} "
        f"thr {cfg.threshold} theta {cfg.endowment} at cost {agg.mean_cost:.2f}"
    )

print()
print(f"artifacts in {OUT}")
