"""Measuring how the graph grows under random exploration.

Each experiment starts from a random physical state and applies a sequence
of random conditional actions, the way a task planner probing outcomes
would.  The number of physical states grows multiplicatively; the graph
size is expected to grow like a sublinear power of the naive size.  At desk
scale a tabular oracle runs alongside every step, so the numbers below are
verified, not just plausible.
"""
from aobs.bench import (
    ExperimentConfig,
    fit_exponent,
    run_seeds,
    summarize_compression,
)

cfg = ExperimentConfig(
    num_vars=20,
    num_values=4,
    num_actions=20,
    oracle_cap=5000,
    with_bdd=True,
)

print("running 10 seeded explorations of 20 actions each...")
rows = run_seeds(cfg, range(10))

print("\nstep  naive size (mean)  graph size (mean)  bdd size (mean)")
by_step = {}
for r in rows:
    by_step.setdefault(r.step, []).append(r)
for step in sorted(by_step):
    group = by_step[step]
    naive = sum(r.n_naive for r in group) / len(group)
    aobs = sum(r.n_aobs for r in group) / len(group)
    bdd = sum(r.n_bdd for r in group) / len(group)
    print(f"{step:4d}  {naive:17.0f}  {aobs:17.1f}  {bdd:15.1f}")

finals = [r for r in rows if r.step == cfg.num_actions]
print("\nfitted growth exponent (graph vs naive, final steps):",
      f"{fit_exponent(finals):.3f}")

summary = summarize_compression(finals)[cfg.num_actions]
print(f"mean compression, naive/graph: {summary['naive_over_aobs']:.1f}")
print(f"mean compression, naive/bdd:   {summary['naive_over_bdd']:.1f}")
