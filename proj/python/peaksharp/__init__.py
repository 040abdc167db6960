"""Peak-sharpness analysis of univariate stochastic reaction networks.

Perturbation indices passed to ``perturb_analysis`` are 0-based, as in the C++ API.
"""

from ._core import (
    AnalysisError,
    ParseError,
    RateExpr,
    Reaction,
    ReactionNetwork,
    check_theorem1,
    cme_stationary,
    diffusion_coeffs,
    discrete_extrema,
    drift_coeffs,
    ensemble_histogram,
    find_extrema,
    parse_network,
    perturb_analysis,
    serialize_network,
    stationary_density,
    total_variation,
    verify_monotonicity,
)


def load_network(path):
    """Parse a ``.rxn`` file."""
    with open(path, encoding="utf-8") as f:
        return parse_network(f.read())


__all__ = [
    "AnalysisError",
    "ParseError",
    "RateExpr",
    "Reaction",
    "ReactionNetwork",
    "check_theorem1",
    "cme_stationary",
    "diffusion_coeffs",
    "discrete_extrema",
    "drift_coeffs",
    "ensemble_histogram",
    "find_extrema",
    "load_network",
    "parse_network",
    "perturb_analysis",
    "serialize_network",
    "stationary_density",
    "total_variation",
    "verify_monotonicity",
]
