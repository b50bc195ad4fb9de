"""One-shot smooth Renyi information quantities on finite alphabets.

Exact smooth max divergence and conditional smooth order-zero entropy,
the one-shot achievable rate region for source coding with a helper, a
Monte-Carlo simulator of the underlying random binning/covering code, and
numerical convergence checks of the per-symbol limits.
"""

from .asymptotics import (
    ConvergenceSeries,
    divergence_series,
    entropy_series,
    spectral_mass,
)
from .coding import (
    Codebook,
    CoveringSet,
    DecodeResult,
    SimReport,
    SupportSet,
    build_covering_set,
    build_support_set,
    decode,
    encode_helper,
    encode_source,
    g_value,
    generate_code,
    sample_xyu,
    simulate,
)
from .errors import (
    BudgetError,
    InputError,
    ResourceError,
    SmoothinfoError,
    SupportError,
)
from .prob import (
    CELL_CAP,
    Channel,
    ConditionalPmf,
    JointPmf,
    Pmf,
    SubPmf,
    compose_markov,
    condition,
    dsbs,
    dump_mass,
    entropy_bits,
    load_channel,
    load_joint,
    load_pmf,
    marginalize,
    product_extend,
    shannon_quantities,
)
from .region import (
    BudgetCheck,
    EpsilonBudget,
    FrontierPoint,
    RatePair,
    achievable_pair,
    default_budget_grid,
    enumerate_channels,
    frontier_csv,
    frontier_search,
    validate_budget,
    wyner_point,
)
from .smooth import (
    SmoothDivergenceResult,
    SmoothEntropyResult,
    max_divergence,
    max_entropy_h0,
    smooth_conditional_h0,
    smooth_divergence_oracle,
    smooth_divergence_procedure,
    smooth_h0_oracle,
    smooth_max_divergence,
)

__all__ = [
    "BudgetCheck",
    "BudgetError",
    "CELL_CAP",
    "Channel",
    "Codebook",
    "ConditionalPmf",
    "ConvergenceSeries",
    "CoveringSet",
    "DecodeResult",
    "EpsilonBudget",
    "FrontierPoint",
    "InputError",
    "JointPmf",
    "Pmf",
    "RatePair",
    "ResourceError",
    "SimReport",
    "SmoothDivergenceResult",
    "SmoothEntropyResult",
    "SmoothinfoError",
    "SubPmf",
    "SupportError",
    "SupportSet",
    "achievable_pair",
    "build_covering_set",
    "build_support_set",
    "compose_markov",
    "condition",
    "decode",
    "default_budget_grid",
    "divergence_series",
    "dsbs",
    "dump_mass",
    "encode_helper",
    "encode_source",
    "entropy_bits",
    "entropy_series",
    "enumerate_channels",
    "frontier_csv",
    "frontier_search",
    "g_value",
    "generate_code",
    "load_channel",
    "load_joint",
    "load_pmf",
    "marginalize",
    "max_divergence",
    "max_entropy_h0",
    "product_extend",
    "sample_xyu",
    "shannon_quantities",
    "simulate",
    "smooth_conditional_h0",
    "smooth_divergence_oracle",
    "smooth_divergence_procedure",
    "smooth_h0_oracle",
    "smooth_max_divergence",
    "spectral_mass",
    "validate_budget",
    "wyner_point",
]

__version__ = "0.1.0"
