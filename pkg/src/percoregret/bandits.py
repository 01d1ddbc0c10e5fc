"""Sequential selection among candidate generators with regret accounting.

UCB1 covers the stochastic regime (arms with fixed reward distributions),
EXP3 the adversarial one (an opponent fixes the reward table).  Arms are
either Bernoulli or backed by a design, whose per-pull reward is a single
spanning-cluster sample normalized by the scaling limit so it lands in
[0, 1].  Traces keep the full reward table, so mean, realized, and weak
regret can all be recomputed after the fact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .lattice import direction_code, edge_probabilities, place_notions
from .percolation import theoretical_k_limit
from .rng import derive_seed, edge_uniforms

POLICIES = ("ucb1", "exp3")


@dataclass(frozen=True)
class BernoulliArm:
    """Reward 1 with probability mean, else 0."""

    mean: float

    def __post_init__(self):
        if not 0.0 <= self.mean <= 1.0:
            raise ValueError(f"arm mean {self.mean} outside [0, 1]")


@dataclass(frozen=True)
class DesignArm:
    """One percolation sample per pull: min(1, spanning count / l**(2-3y))."""

    design: object
    y: float = 0.5
    direction: str = "either"

    def reward_stream(self, master_seed: int, horizon: int) -> np.ndarray:
        lattice = place_notions(self.design)
        probs = edge_probabilities(self.design, lattice)
        arm_seed = derive_seed(master_seed, f"arm:{self.design.id}")
        uniforms = edge_uniforms(arm_seed, 0, horizon, lattice.n_edges)
        counts = np.empty(horizon, dtype=np.int64)
        _kernels.spanning_counts(
            uniforms < probs[None, :],
            lattice.edge_a,
            lattice.edge_b,
            lattice.touch,
            lattice.n_vertices,
            direction_code(self.direction),
            counts,
        )
        limit = theoretical_k_limit(self.design.l, self.y)
        return np.minimum(1.0, counts / limit)


@dataclass
class BanditState:
    """Per-step policy state, passed by value between steps."""

    policy: str
    counts: list
    reward_sums: list
    t: int = 0
    weights: list = None  # exp3 only
    gamma: float = None  # exp3 only

    @property
    def n_arms(self) -> int:
        return len(self.counts)

    def means(self) -> list:
        return [
            s / n if n else 0.0 for s, n in zip(self.reward_sums, self.counts)
        ]

    def exp3_distribution(self) -> list:
        total = sum(self.weights)
        k = self.n_arms
        return [
            self.gamma / k + (1.0 - self.gamma) * w / total for w in self.weights
        ]


def initial_state(policy: str, n_arms: int, gamma: float = None) -> BanditState:
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if n_arms < 1:
        raise ValueError("need at least one arm")
    state = BanditState(policy, [0] * n_arms, [0.0] * n_arms)
    if policy == "exp3":
        if gamma is None or not 0.0 < gamma <= 1.0:
            raise ValueError("exp3 requires gamma in (0, 1]")
        state.weights = [1.0] * n_arms
        state.gamma = gamma
    return state


def default_gamma(n_arms: int, horizon: int) -> float:
    """Standard EXP3 exploration rate for a known horizon."""
    return min(1.0, math.sqrt(n_arms * math.log(n_arms) / ((math.e - 1.0) * horizon)))


def ucb1_select(state: BanditState, t: int = None) -> int:
    """UCB1 arm choice: init sweep, then argmax of mean + confidence bonus.

    Ties break toward the lowest index.
    """
    t = state.t if t is None else t
    counts = state.counts
    for a, n in enumerate(counts):
        if n == 0:
            return a
    k = state.n_arms
    if t < k:
        return t
    best, best_score = 0, -math.inf
    for a in range(k):
        score = state.reward_sums[a] / counts[a] + math.sqrt(2.0 * math.log(t) / counts[a])
        if score > best_score:
            best, best_score = a, score
    return best


def _observe(state: BanditState, arm: int, reward: float) -> BanditState:
    counts = list(state.counts)
    sums = list(state.reward_sums)
    counts[arm] += 1
    sums[arm] += reward
    return replace(state, counts=counts, reward_sums=sums, t=state.t + 1)


def exp3_step(state: BanditState, rewards, rng) -> tuple:
    """One EXP3 step: sample an arm, observe its reward, reweight it.

    rewards is indexable by arm (only the played entry is consumed) or a
    callable arm -> reward.  Returns (arm, updated state).
    """
    if state.policy != "exp3":
        raise ValueError("exp3_step requires an exp3 state")
    probs = state.exp3_distribution()
    u = rng.random()
    acc = 0.0
    arm = state.n_arms - 1
    for a, p in enumerate(probs):
        acc += p
        if u < acc:
            arm = a
            break
    reward = rewards(arm) if callable(rewards) else float(rewards[arm])
    if not 0.0 <= reward <= 1.0:
        raise ValueError(f"exp3 reward {reward} outside [0, 1]")
    new_state = _observe(state, arm, reward)
    weights = list(state.weights)
    weights[arm] *= math.exp(state.gamma * (reward / probs[arm]) / state.n_arms)
    new_state.weights = weights
    return arm, new_state


@dataclass
class RegretTrace:
    """Full record of one bandit run."""

    policy: str
    seed: int
    chosen: np.ndarray  # (T,) arm indices
    rewards: np.ndarray  # (T,) realized rewards
    reward_table: np.ndarray  # (T, K) all arms' rewards, or None
    arm_means: list  # true means when known (all-Bernoulli), else None
    gamma: float = None

    @property
    def horizon(self) -> int:
        return len(self.chosen)

    @property
    def n_arms(self) -> int:
        return self.reward_table.shape[1] if self.reward_table is not None else (
            int(self.chosen.max()) + 1 if len(self.chosen) else 0
        )


def _reward_table(arms: list, horizon: int, seed: int, schedule, rng) -> tuple:
    if schedule is not None:
        table = np.asarray(schedule, dtype=float)
        if table.ndim != 2 or table.shape[1] != len(arms):
            raise ValueError(
                f"schedule must be T x {len(arms)}; got shape {table.shape}"
            )
        if table.shape[0] < horizon:
            raise ValueError(
                f"schedule has {table.shape[0]} rows but horizon is {horizon}"
            )
        if np.any((table < 0.0) | (table > 1.0)):
            raise ValueError("schedule rewards must lie in [0, 1]")
        return table[:horizon], None
    table = np.empty((horizon, len(arms)))
    means = []
    for a, arm in enumerate(arms):
        if isinstance(arm, BernoulliArm):
            table[:, a] = (rng.random(horizon) < arm.mean).astype(float)
            means.append(arm.mean)
        elif isinstance(arm, DesignArm):
            table[:, a] = arm.reward_stream(seed, horizon)
            means.append(None)
        else:
            raise ValueError(f"unknown arm type {type(arm).__name__}")
    if any(m is None for m in means):
        means = None
    return table, means


def run_bandit(
    arms: list,
    policy: str,
    horizon: int,
    seed: int,
    schedule=None,
    gamma: float = None,
) -> RegretTrace:
    """Run a policy for `horizon` steps and record the full reward table.

    Stochastic mode draws the table up front (Bernoulli arms from the seeded
    generator, design arms from counter-based percolation samples), so the
    run is deterministic under (seed, arms, horizon, schedule).
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    rng = np.random.default_rng(seed)
    table, arm_means = _reward_table(arms, horizon, seed, schedule, rng)
    if policy == "exp3" and gamma is None:
        gamma = default_gamma(len(arms), horizon)
    state = initial_state(policy, len(arms), gamma)
    chosen = np.empty(horizon, dtype=np.int64)
    rewards = np.empty(horizon)
    for t in range(horizon):
        if policy == "ucb1":
            arm = ucb1_select(state)
            state = _observe(state, arm, float(table[t, arm]))
        else:
            arm, state = exp3_step(state, table[t], rng)
        chosen[t] = arm
        rewards[t] = table[t, arm]
    return RegretTrace(policy, seed, chosen, rewards, table, arm_means, gamma)


def mean_regret(trace: RegretTrace, arm_means: list = None, form: str = "expected") -> float:
    """Stochastic mean regret against the best arm's true mean.

    form="expected" sums the pulled arms' means step by step; form="counts"
    uses per-arm pull counts.  The two are algebraically identical.
    """
    means = arm_means if arm_means is not None else trace.arm_means
    if means is None:
        raise ValueError("mean regret requires known arm means")
    means = np.asarray(means, dtype=float)
    mu_star = float(means.max())
    horizon = trace.horizon
    if form == "expected":
        return horizon * mu_star - float(means[trace.chosen].sum())
    if form == "counts":
        counts = np.bincount(trace.chosen, minlength=len(means))
        return float(counts.sum()) * mu_star - float((counts * means).sum())
    raise ValueError(f"unknown form {form!r}")


def realized_regret(trace: RegretTrace) -> float:
    """Best fixed arm's cumulative reward minus the agent's."""
    if trace.reward_table is None:
        raise ValueError("realized regret requires the full reward table")
    # fsum keeps the comparison exact: identical columns give exactly 0.
    best = max(
        math.fsum(trace.reward_table[:, a]) for a in range(trace.reward_table.shape[1])
    )
    return best - math.fsum(trace.rewards)


def weak_regret(trace: RegretTrace) -> float:
    """Regret against the best fixed arm in hindsight.

    Same formula as realized_regret; kept as a separate name because the
    stronger best-sequence comparison is a distinct (unimplemented) notion.
    """
    return realized_regret(trace)


def cumulative_regrets(trace: RegretTrace) -> dict:
    """Per-step cumulative regret series for reporting.

    Keys: "mean" (None when arm means are unknown), "realized", "weak".
    """
    out = {"mean": None, "realized": None, "weak": None}
    if trace.arm_means is not None:
        means = np.asarray(trace.arm_means, dtype=float)
        steps = np.arange(1, trace.horizon + 1, dtype=float)
        out["mean"] = steps * means.max() - np.cumsum(means[trace.chosen])
    if trace.reward_table is not None:
        best_fixed = np.cumsum(trace.reward_table, axis=0).max(axis=1)
        realized = best_fixed - np.cumsum(trace.rewards)
        out["realized"] = realized
        out["weak"] = realized
    return out


def empirical_rating(accepted: bool) -> int:
    """The +/-1 acceptance signal for a generator's response."""
    return 1 if accepted else -1


def autonomous_select(returns: list) -> tuple:
    """Rate the highest-return generator +1 and all others -1.

    Ties break toward the lowest index.  Returns (best index, ratings).
    """
    if len(returns) == 0:
        raise ValueError("need at least one return value")
    best = max(range(len(returns)), key=lambda i: (returns[i], -i))
    ratings = [1 if i == best else -1 for i in range(len(returns))]
    return best, ratings
