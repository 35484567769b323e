"""Canonical commutation relations over finite rings, at exact finite scale."""

__version__ = "0.1.0"

from .approx import (EpsCertificate, EpsNeighborhood, SampleAssignment, Theta,
                     TorusPartition, build_grid_partition, certify_epsilon,
                     convergence_study, translate_partition, parse_theta, sample_orbit)
from .characters import (Character, ConditionReport, check_conditions, dual_group,
                         faithful_characters, pairing_character, pairing_kernel,
                         parse_character, sym_iso_characters, trivial_character,
                         two_sided_ideal)
from .errors import (CapacityError, CoverageError, NumericsError, PreconditionError,
                     StructureError)
from .fourier import PlancherelTransform, extend_to_vectors, plancherel_dft
from .heisenberg import (GroupRep, HeisElem, HeisGroup, central_character_defect,
                         heis_group, induced_rep, pair_from_rep, regular_rep,
                         rep_from_pair, rep_homomorphism_defect, schrodinger_rep,
                         trace_table)
from .pairs import (CCRPair, conjugate, direct_sum, inflate, modulated_pair,
                    pair_defect, pair_trace, random_instance, regular_pair,
                    representation_defect, schrodinger_pair, shifted_pair, verify_ccr)
from .rings import (ENUM_CAP, FiniteRing, MatrixRing, PrimeField, ProductRing,
                    RingPower, ZmodRing, parse_ring, ring_from_descriptor)
from .suite import RunReport, suite
from .svn import (Decomposition, EquivalenceWitness, block_flip, commutant_dim,
                  decompose, modulation_align_residual, pairs_equivalent,
                  phi_unitary, psi_unitary, shift_align_residual, svn_intertwiner,
                  transform_align_residual)

__all__ = [name for name in dir() if not name.startswith("_")]
