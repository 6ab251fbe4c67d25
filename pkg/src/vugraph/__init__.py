"""Valid utility games under information-sharing constraint graphs."""

from .constructions import (
    BoundReport,
    WorstCaseInstance,
    attack_graph,
    bound_report,
    build_prop3_instance,
    build_theorem1_instance,
    prop3_bound,
    theorem1_bound,
    theorem2_bound,
)
from .errors import (
    ConstructionInfeasible,
    DegenerateGame,
    InputError,
    NoPureEquilibrium,
    SizeLimitError,
    VugError,
)
from .games import (
    Game,
    UtilitySpec,
    best_response_path,
    check_consistency,
    check_valid_utility,
    empirical_poa,
    enumerate_equilibria,
    is_equilibrium,
    masked_view,
    optimum,
    utility,
)
from .graphs import (
    ConstraintGraph,
    clique_cover_number,
    fractional_clique_cover,
    fractional_independence,
    independence_number,
    information_groups,
    maximal_cliques,
    reciprocal_subgraph,
)
from .welfare import CoverageWelfare, GroundSet, check_properties, evaluate, marginal_gain

__version__ = "0.1.0"
