"""Positive lattice bases, gaps of conical semigroups, and their heights."""

__version__ = "0.1.0"

from .asymptotics import AngleMethod, CountingReport, SolidAngle, solid_angle, verify_gap_asymptotics, \
    verify_general_cone_count
from .enumeration import CountQuery, EnumerationLimitError, PointSet, Region, count, enumerate_region
from .gaps import GapCertificate, Status, classify, construct_gap_vectors, gap_height_bound, list_gaps
from .lattice import Cone, Lattice, NotPositiveError, PositiveBasis, generate_positive_basis, positive_bases, \
    transport
from .linalg import RationalMatrix, RationalVector
from .minima import CoveringRadius, Family, covering_radius, minima_report, successive_minima, verify_gen_small, \
    verify_small_gap

__all__ = [
    "AngleMethod", "Cone", "CountQuery", "CountingReport", "CoveringRadius", "EnumerationLimitError", "Family",
    "GapCertificate", "Lattice", "NotPositiveError", "PointSet", "PositiveBasis", "RationalMatrix",
    "RationalVector", "Region", "SolidAngle", "Status", "classify", "construct_gap_vectors", "count",
    "covering_radius", "enumerate_region", "gap_height_bound", "generate_positive_basis", "list_gaps",
    "minima_report", "positive_bases", "solid_angle", "successive_minima", "transport", "verify_gap_asymptotics",
    "verify_gen_small", "verify_general_cone_count", "verify_small_gap",
]
