"""(2,2)-generalized bicycle codes: construction, exact distance, lattice bounds,
Cayley-graph equivalence and classification."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .cayley import (
    AbelianGroup,
    CanonicalForm,
    CayleyGraph,
    canonical_form,
    cayley_cyclic,
    incidence_x,
    incidence_z,
    is_connected,
    is_isomorphic,
    is_three_connected,
    max_element_order,
    torus_graph,
)
from .classify import ClassificationTable, CodeRecord, classify, emit, enumerate_triples
from .distance import DistanceResult, SearchOptions, face_sum_test, min_distance, min_distance_z
from .equivalence import EquivVerdict, Triple, canonical_triple, cgp_equivalent
from .f2 import BitMatrix, Poly, kernel_basis, row_echelon, rowspace_contains
from .gbcode import (
    CodeParams,
    GbCode,
    fam_even,
    fam_kp,
    fam_odd,
    fam_square,
    gb_build,
    gb_dimension,
    gb_triple,
    oracle_distance,
    parse_literal,
)
from .lattice import Lattice2, LatticeVector, lambda_min, lattice_from_alpha, lattice_bound
