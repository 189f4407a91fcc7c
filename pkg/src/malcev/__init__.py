"""Exact arithmetic and decision procedures for finitely generated nilpotent
groups of fixed class and rank, presented as quotients of free nilpotent
groups by full-form relator matrices."""

from .extgcd import (BoundedCombinationTrace, RejectedInput, extgcd_bounded,
                     extgcd_pair_bounded, reduce_coefficients)
from .freegroup import (BasicCommutator, ExpWord, HallBasis, SizeCapExceeded,
                        build_hall_basis, coords_inverse, coords_mult,
                        coords_pow, coords_to_word, eval_free, identity_coords,
                        structure_relations)
from .presentations import (FullFormMatrix, NilpotentPresentation,
                            QuotientPresentation, consistency_check,
                            direct_product, free_presentation,
                            from_finite_presentation,
                            make_quotient_presentation,
                            nilpotent_presentation_consistent)
from .groups import (GroupElement, element, identity, inverse, mult,
                     normal_form, power, reduce_coords, word_problem)
from .subgroups import (CoordinateMatrix, MembershipWitness,
                        apply_row_operation, coordinate_matrix,
                        express_in_original_generators, full_form, membership,
                        subgroup_presentation)
from .decisions import (ConjugacyAnswer, HomSpec, NoPower, NotInImage,
                        centralizer, conjugacy, element_order,
                        kernel_and_preimage, power_problem, torsion_bound)

__all__ = [name for name in dir() if not name.startswith("_")]
