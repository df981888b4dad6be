"""Entanglement generation on group association scheme networks."""
from .groups import FamilySpec, GroupTable, InvalidGroupError, build_family, conjugacy_classes, load_table
from .characters import (
    CharacterTable,
    ZetaTable,
    character_table_numeric,
    eigenmatrices,
    family_character_table,
    zeta_table,
)
from .scheme import build_scheme
from .optimize import cross_strata_optimize, optimal_amplitude, same_stratum_optimum

__all__ = [
    "FamilySpec", "GroupTable", "InvalidGroupError", "build_family", "conjugacy_classes",
    "load_table", "CharacterTable", "ZetaTable", "character_table_numeric", "eigenmatrices",
    "family_character_table", "zeta_table", "build_scheme", "cross_strata_optimize",
    "optimal_amplitude", "same_stratum_optimum",
]
