"""Tersoff molecular dynamics on a lane-width-oblivious vector core."""

from ._core import (
    AtomSystem,
    ConfigError,
    NeighborList,
    NumericError,
    ParamTable,
    ParseError,
    SimulationBox,
    build_neighbor_list,
    builtin_silicon,
    compute_ref,
    evaluate_forces,
    init_velocities,
    kinetic_energy,
    load_params,
    make_diamond_lattice,
    needs_rebuild,
    parse_params,
    run_nve,
    run_verification,
    temperature,
    total_momentum,
)

__version__ = "0.1.0"

__all__ = [
    "AtomSystem",
    "ConfigError",
    "NeighborList",
    "NumericError",
    "ParamTable",
    "ParseError",
    "SimulationBox",
    "build_neighbor_list",
    "builtin_silicon",
    "compute_ref",
    "evaluate_forces",
    "init_velocities",
    "kinetic_energy",
    "load_params",
    "make_diamond_lattice",
    "needs_rebuild",
    "parse_params",
    "run_nve",
    "run_verification",
    "temperature",
    "total_momentum",
]
