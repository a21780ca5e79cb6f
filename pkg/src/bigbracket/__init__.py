"""Exact symbolic engine for the graded Poisson algebra of a degree-shifted
cotangent bundle, with Courant/Lie algebroid structures, Nijenhuis-type tensor
calculus, structure predicates, and hierarchy verification."""

from .algebra import GradedElement, PhaseSpace, big_bracket, multiply
from .courant import (
    CourantStructure,
    axioms_oracle,
    dorfman,
    is_courant,
    is_lie_algebroid,
    with_background,
)
from .errors import (
    AmbientMismatchError,
    DegreeError,
    EngineError,
    InstanceError,
    PreconditionError,
    UnsupportedModeError,
)
from .hierarchy import (
    HierarchyRequest,
    deform_iterated,
    omega_hierarchy,
    pi_hierarchy,
    verify_hierarchy,
    verify_hierarchy_compatibility,
)
from .instances import InstanceFile, SplitMix64, random_instance
from .report import Condition, StructureReport
from .structures import (
    compatible_complementary,
    compatible_Hitchin,
    compatible_OmegaN,
    compatible_PN,
    compatible_POmega,
    is_closed,
    is_compatible_pair,
    is_complementary_form,
    is_exact_PqN,
    is_exact_PqN_background,
    is_Hitchin,
    is_nijenhuis_courant,
    is_nijenhuis_lie,
    is_OmegaN,
    is_PN,
    is_poisson,
    is_POmega,
    is_PqN_background,
    relations_check,
)
from .supergeometry import AlgebroidSpec, identity_element, mu_from_spec, pairing
from .tensors import (
    EndoTensor,
    bivector_element,
    cartan_differential,
    concomitant_C,
    deform,
    function_to_endo,
    nijenhuis_concomitant,
    torsion_function,
    torsion_lie,
    torsion_sections,
    two_form_element,
)

__version__ = "1.0.0"
