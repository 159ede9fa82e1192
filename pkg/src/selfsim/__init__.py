"""Continuous affine self-similar functions on [0, 1] and their Hölder exponents."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AllCellsFlat,
    CapacityExceeded,
    IndexOutOfRange,
    InvalidParams,
    NotContinuous,
    ParseError,
    SelfSimError,
    UnsupportedOrientation,
    UnsupportedPreset,
)
from .evaluator import (  # noqa: E402
    CellSummary,
    GridFunction,
    cell,
    eval_point,
    grid_points,
    iterate,
    operator_iterates,
)
from .holder import (  # noqa: E402
    BoundInputs,
    HolderReport,
    analytic_exponent,
    empirical_exponent,
    monotonicity_check,
    oscillation_table,
    seminorm_lower,
    seminorm_upper_bound,
    seminorm_upper_rhs,
)
from .params import (  # noqa: E402
    PlainParams,
    Regime,
    RegimeKind,
    SelfSimilarParams,
    affine_map,
    check_continuity,
    check_contraction,
    classify_regime,
    derive_offsets,
    from_plain,
    load_params,
    partition_points,
    to_plain,
)
from .presets import make as make_preset, reference_value  # noqa: E402
