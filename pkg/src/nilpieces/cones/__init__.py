"""Nilpotent cones over finite fields: points, classification, censuses and filtrations."""

from .census import BUDGET, BudgetExceeded, CensusLine, CensusReport, UnsupportedCensus, census_size, run_census
from .classify import (
    CONE_TAGS,
    OrbitLabel,
    classify_exotic_char2,
    classify_o_char2,
    classify_o_odd,
    classify_sp_char2,
    classify_sp_odd,
    e_membership,
    hesselink_o,
    hesselink_sp,
    jordan_box_column,
    script_e_membership,
)
from .points import ExoticPoint, in_exotic_S, pi_map, psi, psi_tilde, psi_tilde_inverse, random_exotic_point, s_section

__all__ = [
    "BUDGET",
    "BudgetExceeded",
    "CONE_TAGS",
    "CensusLine",
    "CensusReport",
    "ExoticPoint",
    "OrbitLabel",
    "UnsupportedCensus",
    "census_size",
    "classify_exotic_char2",
    "classify_o_char2",
    "classify_o_odd",
    "classify_sp_char2",
    "classify_sp_odd",
    "e_membership",
    "hesselink_o",
    "hesselink_sp",
    "in_exotic_S",
    "jordan_box_column",
    "pi_map",
    "psi",
    "psi_tilde",
    "psi_tilde_inverse",
    "random_exotic_point",
    "run_census",
    "s_section",
    "script_e_membership",
]
