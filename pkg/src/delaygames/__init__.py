"""Games under delayed control and delay games, solved exactly at desk scale."""

from delaygames.model import (
    CONTROLLER,
    ENVIRONMENT,
    Arena,
    ConditionAutomaton,
    ControlGame,
    DelayGameSpec,
    InvalidInput,
    LassoWord,
    StateCondition,
    complement_condition,
    eval_condition_on_lasso,
    product_condition,
    validate_control_game,
)
from delaygames.solver import (
    PositionalStrategy,
    TurnGame,
    attractor,
    solve_delay_free,
    verify_positional_strategy,
)
from delaygames.control import (
    ControlVerdict,
    DelayedStrategy,
    MaxDelayReport,
    build_queue_game,
    extract_delayed_strategy,
    max_delay,
    solve_environment,
    solve_under_delay,
    verify_delayed_strategy,
)
from delaygames.delaygame import DelayVerdict, build_buffer_game, solve_delay_game
from delaygames.transforms import (
    check_correspondence,
    control_to_delay_language,
    delay_language_to_control_game,
    roundtrip_check,
)
from delaygames.stochastic import (
    AdversarialMDP,
    FiniteMixedStrategy,
    almost_sure_reachability,
    almost_sure_safety,
    check_almost_sure,
    induce_adversarial_mdp,
)
from delaygames.oracle import brute_force_delay_game, brute_force_under_delay

__all__ = [
    "CONTROLLER",
    "ENVIRONMENT",
    "AdversarialMDP",
    "Arena",
    "ConditionAutomaton",
    "ControlGame",
    "ControlVerdict",
    "DelayGameSpec",
    "DelayVerdict",
    "DelayedStrategy",
    "FiniteMixedStrategy",
    "InvalidInput",
    "LassoWord",
    "MaxDelayReport",
    "PositionalStrategy",
    "StateCondition",
    "TurnGame",
    "almost_sure_reachability",
    "almost_sure_safety",
    "attractor",
    "brute_force_delay_game",
    "brute_force_under_delay",
    "build_buffer_game",
    "build_queue_game",
    "check_almost_sure",
    "check_correspondence",
    "complement_condition",
    "control_to_delay_language",
    "delay_language_to_control_game",
    "eval_condition_on_lasso",
    "extract_delayed_strategy",
    "induce_adversarial_mdp",
    "max_delay",
    "product_condition",
    "roundtrip_check",
    "solve_delay_free",
    "solve_delay_game",
    "solve_environment",
    "solve_under_delay",
    "validate_control_game",
    "verify_delayed_strategy",
    "verify_positional_strategy",
]
