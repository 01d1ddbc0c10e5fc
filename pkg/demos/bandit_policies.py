"""Walkthrough: UCB1 vs EXP3 with mean, realized, and weak regret.

Run with: python3 demos/bandit_policies.py
"""
import numpy as np

from percoregret import (
    BernoulliArm,
    autonomous_select,
    mean_regret,
    run_bandit,
    weak_regret,
)

# Stochastic setting: three Bernoulli generators, UCB1 finds the best.
arms = [BernoulliArm(0.3), BernoulliArm(0.7), BernoulliArm(0.5)]
trace = run_bandit(arms, "ucb1", horizon=5000, seed=0)
pulls = np.bincount(trace.chosen, minlength=3)
print("UCB1 pulls per arm:", pulls.tolist())
print(f"mean regret after 5000 steps: {mean_regret(trace):.1f}")

# Adversarial setting: a fixed reward schedule, EXP3 tracks the best fixed
# arm in hindsight.
horizon, k = 5000, 3
schedule = np.random.default_rng(99).random((horizon, k))
schedule[:, 1] = np.minimum(1.0, schedule[:, 1] + 0.15)  # arm 1 slightly better
trace = run_bandit([BernoulliArm(0.0)] * k, "exp3", horizon, seed=1, schedule=schedule)
print(f"EXP3 weak regret: {weak_regret(trace):.1f} "
      f"(bound scale sqrt(T K ln K) = {np.sqrt(horizon * k * np.log(k)):.1f})")

# One-shot autonomous rating: +1 to the generator with the most return.
returns = [float(schedule[:, a].sum()) for a in range(k)]
best, ratings = autonomous_select(returns)
print(f"autonomous rating: best generator {best}, ratings {ratings}")
