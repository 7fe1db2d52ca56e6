"""Totally real number fields, ideal lattices and Weil heights."""

from .field import FieldElement, IdealLattice, NotTotallyRealError, NumberField, ideal_from_generators, \
    init_field, totally_positive, unit_ideal
from .heights import Verdict, check_height_inequalities, verify_height_inequalities, weil_height
from .verify import positive_ideal_basis, verify_ideal_gaps

__all__ = [
    "FieldElement", "IdealLattice", "NotTotallyRealError", "NumberField", "Verdict", "check_height_inequalities",
    "ideal_from_generators", "init_field", "positive_ideal_basis", "totally_positive", "unit_ideal",
    "verify_height_inequalities", "verify_ideal_gaps", "weil_height",
]
