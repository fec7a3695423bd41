"""Tropical A-discriminants, initial cycles, Newton polytopes and resultant
degrees from integer point configurations."""

from .cayley import (
    CayleyConfig,
    MixedCell,
    Subdivision,
    cayley_matrix,
    delta_equivalence_classes,
    is_essential,
    membership_via_mixed,
    mixed_subdivision,
    regular_subdivision,
    resultant_degree,
)
from .config import Configuration, check_configuration
from .estimators import TropicalDiscriminant
from .exceptions import (
    Defective,
    DimensionTooLarge,
    GenericityFailure,
    InvalidConfiguration,
    KernelNotOneDimensional,
    LatticeTooLarge,
    NotEssential,
    PyramidInput,
    TooFewBlocks,
    TropdiscError,
)
from .fan import (
    WeightedFan,
    bergman_fan,
    fan_graph,
    membership,
    pushforward,
    tropical_discriminant,
)
from .initial import (
    ChainEngine,
    InitialCycle,
    codimension,
    degree,
    degree_of_fan,
    initial_cycle,
    initial_cycle_of_fan,
    initial_monomial,
)
from .matroid import FlatLattice, build_lattice
from .newton import hull_summary, recover_discriminant, sample_extreme_monomials

__version__ = "0.1.0"

__all__ = [
    "CayleyConfig",
    "ChainEngine",
    "Configuration",
    "Defective",
    "DimensionTooLarge",
    "FlatLattice",
    "GenericityFailure",
    "InitialCycle",
    "InvalidConfiguration",
    "KernelNotOneDimensional",
    "LatticeTooLarge",
    "MixedCell",
    "NotEssential",
    "PyramidInput",
    "Subdivision",
    "TooFewBlocks",
    "TropdiscError",
    "TropicalDiscriminant",
    "WeightedFan",
    "bergman_fan",
    "build_lattice",
    "cayley_matrix",
    "check_configuration",
    "codimension",
    "degree",
    "degree_of_fan",
    "delta_equivalence_classes",
    "fan_graph",
    "hull_summary",
    "initial_cycle",
    "initial_cycle_of_fan",
    "initial_monomial",
    "is_essential",
    "membership",
    "membership_via_mixed",
    "mixed_subdivision",
    "pushforward",
    "recover_discriminant",
    "regular_subdivision",
    "resultant_degree",
    "sample_extreme_monomials",
    "tropical_discriminant",
]
