"""Sliced transport distances and kernels for persistence diagrams and measures."""

from .errors import SizeLimitError, ValidationError
from .fg1d import Projected1DMeasure, SurvivalFunction, fg1d, fg1d_bruteforce, survival
from .fg2d import Matching, fg2d, fg2d_bruteforce
from .kernel import GramMatrix, distance_power_matrix, eigcheck, gram, sfg_kernel, suggest_sigmas
from .measures import (
    EMPTY,
    PersistenceMeasure,
    PlanePoint,
    load_measure,
    normalize,
    pers,
    pers_infty,
    save_measure,
)
from .projection import Event, EventList, events, project_cont, project_measure, project_orth
from .sliced import SfgConfig, sfg, sfg_approx, sfg_distance_matrix, sfg_exact, sfg_power_matrix
from .synth import OrbitParams, gen_dirac_family, gen_grid_family, gen_orbit, gen_uniform

__version__ = "0.1.0"

__all__ = [
    "EMPTY",
    "Event",
    "EventList",
    "GramMatrix",
    "Matching",
    "OrbitParams",
    "PersistenceMeasure",
    "PlanePoint",
    "Projected1DMeasure",
    "SfgConfig",
    "SizeLimitError",
    "SurvivalFunction",
    "ValidationError",
    "distance_power_matrix",
    "eigcheck",
    "events",
    "fg1d",
    "fg1d_bruteforce",
    "fg2d",
    "fg2d_bruteforce",
    "gen_dirac_family",
    "gen_grid_family",
    "gen_orbit",
    "gen_uniform",
    "gram",
    "load_measure",
    "normalize",
    "pers",
    "pers_infty",
    "project_cont",
    "project_measure",
    "project_orth",
    "save_measure",
    "sfg",
    "sfg_approx",
    "sfg_distance_matrix",
    "sfg_exact",
    "sfg_kernel",
    "sfg_power_matrix",
    "suggest_sigmas",
    "survival",
]
