"""Gauge-invariant monomials for classifying multiplicity-free fusion categories."""
from .classify import classify, gauge_equivalent, monoidal_equivalent, symmetrize, zero_set_orbit
from .invariants import (UNDEFINED, evaluate_basis, evaluate_monomial, invariant_basis, localize_pentagon,
                         phi_coverage_check, rationality_check)
from .lattice import build_exponent_matrix, hnf_with_transform, kernel_basis, lattice_equal
from .ring import (Automorphism, BasedRing, automorphism_group, gamma_set, load_ring, n_extended, parse_ring,
                   validate_ring)
from .symbols import (Monomial, PhiIndex, Solution, apply_automorphism, apply_gauge, load_solution,
                      pentagon_instances, phi_set, sample_normalized_gauge, verify_solution, zero_set)

__version__ = "0.1.0"
