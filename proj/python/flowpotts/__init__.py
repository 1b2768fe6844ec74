"""Flow and random-current representations of the Potts model on small graphs."""

from ._flowpotts import (
    CapExceeded,
    InvalidArgument,
    Multigraph,
    PreconditionFailed,
    builtin_graph,
    count_flows,
    count_flows_enum,
    decay,
    expect_flow,
    flow_polynomial,
    parse_graph,
    potts_sigma,
    sigma,
    simon_check,
    switching_check_fixed,
    tutte,
    verify,
    verify_curiosity,
    whitney,
)

__all__ = [
    "CapExceeded",
    "InvalidArgument",
    "Multigraph",
    "PreconditionFailed",
    "builtin_graph",
    "count_flows",
    "count_flows_enum",
    "decay",
    "expect_flow",
    "flow_polynomial",
    "parse_graph",
    "potts_sigma",
    "sigma",
    "simon_check",
    "switching_check_fixed",
    "tutte",
    "verify",
    "verify_curiosity",
    "whitney",
]
