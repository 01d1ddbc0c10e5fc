"""Design resilience scoring via 2D bond percolation with regret accounting."""

from .lattice import (
    BondConfiguration,
    ClusterLabeling,
    LatticeError,
    LatticeSpec,
    count_spanning_clusters,
    edge_probabilities,
    label_clusters,
    lattice_for_count,
    place_notions,
    sample_configuration,
    square_lattice,
)
from .percolation import (
    CriticalEstimate,
    EnumerationLimitError,
    PercolationEstimate,
    average_spanning_clusters,
    config_probability,
    estimate_p_infinity,
    estimate_pc,
    estimate_theta,
    exhaustive_enumerate,
    literal_theta_product,
    spanning_edge_set,
    sweep_grid,
    theoretical_k_limit,
)
from .designs import (
    Design,
    DesignValidationError,
    RegretSummary,
    ResiliencyReport,
    empirical_regret,
    evaluate_designs,
    parse_design,
    parse_design_set,
    regret_summary,
    resiliency_reward,
    theoretical_regret,
)
from .bandits import (
    BanditState,
    BernoulliArm,
    DesignArm,
    RegretTrace,
    autonomous_select,
    default_gamma,
    empirical_rating,
    exp3_step,
    initial_state,
    mean_regret,
    realized_regret,
    run_bandit,
    ucb1_select,
    weak_regret,
)
from .rng import derive_seed, edge_uniforms

__version__ = "0.1.0"
