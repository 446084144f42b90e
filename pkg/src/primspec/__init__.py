"""Invariant-ideal structure of finite commuting Markov semigroups."""

from .core import (MarkovOp, MarkovSemigroup, SystemSpec, dump_system, load_system,
                   make_semigroup, read_system, write_system)
from .errors import InputError, NumericalError, PrimSpecError
from .gelfand import (MeanErgodicVerdict, evaluate_verdict, hat, hat_inverse,
                      mean_ergodicity_verdict, verify_lattice_isomorphism)
from .ideals import (SIdeal, enumerate_s_ideals, is_self_supporting,
                     minimal_self_supporting_sets, restrict_semigroup)
from .means import (ErgodicNetConfig, abel_projection, cesaro_projection, exact_projection,
                    mean_projection, radical_membership_via_means, visit_frequency)
from .measures import ergodic_measures, is_ergodic, is_extreme, is_invariant
from .spectrum import (FULL_ALGEBRA, PrimSpectrum, closure, hull, ker, minimal_center_support,
                       prim_spectrum, radical)
from .systems import (build_koopman, build_product, build_rotation, build_ulam,
                      random_instance)

__version__ = "0.1.0"

__all__ = [
    "MarkovOp",
    "MarkovSemigroup",
    "SystemSpec",
    "dump_system",
    "load_system",
    "make_semigroup",
    "read_system",
    "write_system",
    "InputError",
    "NumericalError",
    "PrimSpecError",
    "MeanErgodicVerdict",
    "evaluate_verdict",
    "hat",
    "hat_inverse",
    "mean_ergodicity_verdict",
    "verify_lattice_isomorphism",
    "SIdeal",
    "enumerate_s_ideals",
    "is_self_supporting",
    "minimal_self_supporting_sets",
    "restrict_semigroup",
    "ErgodicNetConfig",
    "abel_projection",
    "cesaro_projection",
    "exact_projection",
    "mean_projection",
    "radical_membership_via_means",
    "visit_frequency",
    "ergodic_measures",
    "is_ergodic",
    "is_extreme",
    "is_invariant",
    "FULL_ALGEBRA",
    "PrimSpectrum",
    "closure",
    "hull",
    "ker",
    "minimal_center_support",
    "prim_spectrum",
    "radical",
    "build_koopman",
    "build_product",
    "build_rotation",
    "build_ulam",
    "random_instance",
]
