"""de Rham–Witt complexes of log rings by saturation."""
from .engine import (AxiomReport, BasicTerm, DRWGroup, SaturationReport, axiom_check,
                     dim_mod_p, dimension_formula, drw_zero_degree_check, family,
                     generate_terms, level_one_check, operator_matrices, saturate)
from .model import LiftModel, model_from_log_ring
from .system import FreeSystem, clear_system_cache, get_system

__all__ = [
    "AxiomReport", "BasicTerm", "DRWGroup", "SaturationReport", "axiom_check", "dim_mod_p",
    "dimension_formula", "drw_zero_degree_check", "family", "generate_terms", "level_one_check",
    "operator_matrices", "saturate", "LiftModel", "model_from_log_ring", "FreeSystem",
    "clear_system_cache", "get_system",
]
