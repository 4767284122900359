"""nilcoh: exact cohomology calculus for nilpotent orbit closures."""

from .roots import CartanType, RootSystem, Weight, WeylElement, build_root_system
from .subspaces import RootSet, WeightedDiagram, nilradical_of_parabolic, subspace_from_diagram
from .characters import WeightMultiset, exterior_power, full_sym_character, sym_power_count
from .cohomology import BBWResult, bbw, broer_case_check, euler_mult, is_small, weyl_dimension

__all__ = [
    "CartanType", "RootSystem", "Weight", "WeylElement", "build_root_system",
    "RootSet", "WeightedDiagram", "nilradical_of_parabolic", "subspace_from_diagram",
    "WeightMultiset", "exterior_power", "full_sym_character", "sym_power_count",
    "BBWResult", "bbw", "broer_case_check", "euler_mult", "is_small", "weyl_dimension",
]
