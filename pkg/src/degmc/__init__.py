"""Approximately uniform sampling and approximate counting of labeled
simple graphs whose node degrees lie in prescribed intervals."""

from .graphs import (
    BoundExceeded,
    DegreeInterval,
    Graph,
    Infeasible,
    NearRegularParams,
    NotGraphical,
    ParseError,
    intervals_from_observation,
    is_graphical,
    read_edge_list,
    read_intervals,
    realize,
    realize_in_interval,
    write_edge_list,
    write_intervals,
)
from .chains import (
    DegreeIntervalKernel,
    RunConfig,
    SwitchHingeFlipKernel,
    SwitchKernel,
    make_rng,
    run,
    spawn_rngs,
)

__all__ = [
    "BoundExceeded",
    "DegreeInterval",
    "DegreeIntervalKernel",
    "Graph",
    "Infeasible",
    "NearRegularParams",
    "NotGraphical",
    "ParseError",
    "RunConfig",
    "SwitchHingeFlipKernel",
    "SwitchKernel",
    "intervals_from_observation",
    "is_graphical",
    "make_rng",
    "read_edge_list",
    "read_intervals",
    "realize",
    "realize_in_interval",
    "run",
    "spawn_rngs",
    "write_edge_list",
    "write_intervals",
]
