"""Normal-form games, payoff transformations, and witnesses for transformations
that change best-response or Nash sets."""

from .bimatrix import BimatrixSolution, enumerate_bimatrix_nash
from .equivalence import br_sets_equal, equivalence_report, pure_nash_sets_equal
from .errors import BudgetExceeded, DimensionError, InexactEvaluation, ParseError
from .falsifier import (
    IsPat,
    NoRefutation,
    Violation,
    Witness,
    falsify,
    probe_constant_game,
    probe_distance_relation,
    probe_monotonicity,
    probe_translation_invariance,
)
from .game import (
    BestResponseSet,
    Game,
    MixedProfile,
    enumerate_pure_nash,
    expected_utility,
    is_best_response,
    is_nash,
    pure_best_responses,
)
from .scalarmap import Affine, Compose, Exp, Neg, PiecewiseLinear, PowerOddInt, ScalarMap, Sum
from .transforms import (
    GameTransformation,
    PatRefutation,
    PatSpec,
    apply_transformation,
    depends_only_on_opponents,
    detect_pat,
    pat_to_transformation,
)

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "BestResponseSet",
    "BimatrixSolution",
    "BudgetExceeded",
    "Compose",
    "DimensionError",
    "Exp",
    "Game",
    "GameTransformation",
    "InexactEvaluation",
    "IsPat",
    "MixedProfile",
    "Neg",
    "NoRefutation",
    "ParseError",
    "PatRefutation",
    "PatSpec",
    "PiecewiseLinear",
    "PowerOddInt",
    "ScalarMap",
    "Sum",
    "Violation",
    "Witness",
    "apply_transformation",
    "br_sets_equal",
    "depends_only_on_opponents",
    "detect_pat",
    "enumerate_bimatrix_nash",
    "enumerate_pure_nash",
    "equivalence_report",
    "expected_utility",
    "falsify",
    "is_best_response",
    "is_nash",
    "pat_to_transformation",
    "probe_constant_game",
    "probe_distance_relation",
    "probe_monotonicity",
    "probe_translation_invariance",
    "pure_best_responses",
    "pure_nash_sets_equal",
]
