"""Exploitability, node censuses and cost accounting."""

from .best_response import (
    BestResponse,
    Exploitability,
    as_tree,
    best_response_value,
    counterfactual_values,
    exploitability,
    profile_values,
)
from .census import (
    CensusPrediction,
    ColorCensus,
    NodeColor,
    NotPureProfile,
    OutOfFormulaRange,
    census_by_color,
    census_recurrence,
    op_count_model,
    op_ratio,
    predict_census,
)


def nodes_touched(solver) -> int:
    """Node visits accumulated by a solver across all its iterations."""
    return int(getattr(solver, "nodes_touched_", 0))


__all__ = [
    "BestResponse",
    "CensusPrediction",
    "ColorCensus",
    "Exploitability",
    "NodeColor",
    "NotPureProfile",
    "OutOfFormulaRange",
    "as_tree",
    "best_response_value",
    "census_by_color",
    "census_recurrence",
    "counterfactual_values",
    "exploitability",
    "nodes_touched",
    "op_count_model",
    "op_ratio",
    "predict_census",
    "profile_values",
]
