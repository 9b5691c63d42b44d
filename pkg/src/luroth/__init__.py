"""Lüroth series: exact expansions, interval geometry, digit-restricted sets
and finite-depth Hausdorff-dimension estimates."""
from .core import (
    CycleNotFoundError,
    DomainError,
    InfiniteDigitError,
    LogValue,
    PeriodicExpansion,
    RealExpansion,
    continuants,
    convergents,
    digits_of,
    evaluate,
    evaluate_periodic,
    expand_rational,
    expand_real,
    first_digit,
    log_continuant,
    luroth_map,
    residual,
)
from .constructions import (
    ExplicitScheme,
    ProductMeasureSpec,
    TowerScheme,
    digit_range,
    measure_of_fundamental_interval,
    membership,
    n0_finder,
    s0,
    sample_word,
    scheme_from_dict,
)
from .geometry import (
    Interval,
    cylinder,
    diameter_bounds,
    fundamental_interval,
    k_interval,
    neighbor_gaps,
    s_map,
    tail_union_closure,
    telescoping_check,
)
from .dimension import (
    ExponentParams,
    Verdict,
    check_child_sum,
    covering_exponent,
    covering_sum,
    local_dimension,
    ratio_envelopes,
    theorem_bounds,
    verify_prop_usgjl,
)

__version__ = "0.1.0"
