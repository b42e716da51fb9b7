"""Exact relative-commutator engine for finite omega-groups."""

from .algebra import (OmegaAlgebra, Signature, direct_power, direct_product,
                      eval_term, materialize, validate_algebra)
from .commutator import (CommutatorReport, TripleAlgebra, build_triple,
                         c_values, higgins_commutator, image_condition,
                         is_central, is_central_direct, relative_commutator,
                         universal_oracle)
from .config import RunConfig, default_config
from .constructions import (TruncatedRingSpec, build_group, build_ring,
                            named_ideal)
from .hom import Homomorphism, quotient
from .pxmod import (PrecrossedModule, Submodule, is_crossed,
                    peiffer_commutator, peiffer_crosscheck, to_precrossed,
                    to_pxm, xm_basis)
from .sets import (Ideal, Subalgebra, enumerate_ideals, generate_ideal,
                   generate_subalgebra, is_ideal, m_to_the_n,
                   meet_join_ideals, whole_algebra, whole_ideal)
from .terms import Term, parse_identity, parse_term, term_to_str
from .variety import (IdentityBasis, abelianization_basis, basis_from_strings,
                      preset_basis, reflection, satisfies, verbal_values)

__all__ = [
    "OmegaAlgebra", "Signature", "RunConfig", "default_config",
    "Ideal", "Subalgebra", "Homomorphism", "Term", "IdentityBasis",
    "CommutatorReport", "TripleAlgebra", "PrecrossedModule", "Submodule",
    "TruncatedRingSpec",
    "direct_power", "direct_product", "eval_term", "materialize",
    "validate_algebra", "enumerate_ideals", "generate_ideal",
    "generate_subalgebra", "is_ideal", "m_to_the_n", "meet_join_ideals",
    "whole_algebra", "whole_ideal", "quotient", "parse_identity",
    "parse_term", "term_to_str", "abelianization_basis",
    "basis_from_strings", "preset_basis", "reflection", "satisfies",
    "verbal_values", "build_triple", "c_values", "higgins_commutator",
    "image_condition", "is_central", "is_central_direct",
    "relative_commutator", "universal_oracle", "build_group", "build_ring",
    "named_ideal", "is_crossed", "peiffer_commutator", "peiffer_crosscheck",
    "to_precrossed", "to_pxm", "xm_basis",
]
