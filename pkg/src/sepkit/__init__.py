"""Separability of bipartite states and positive maps between matrix algebras."""

from .errors import (
    BadRank,
    DegenerateBlocks,
    DimCap,
    DimMismatch,
    InvalidDensity,
    NoConvergence,
    NotCP,
    NotHermitian,
    NotHermitianPreserving,
    NotNormalized,
    SepkitError,
    WeightError,
    WitnessIsPSD,
)
from .maps import (
    LinearMapRep,
    Verdict,
    adjoint_map,
    apply,
    compose_with_transposition,
    hadamard_map,
    identity_map,
    is_completely_positive,
    is_k_positive_numeric,
    is_positive_numeric,
    kraus_from_choi,
    map_from_images,
    map_from_kraus,
    tensor_with_identity,
    transposition,
)
from .separability import (
    analyze,
    bell_bound_check,
    block_representation,
    blocks_product_test,
    distance_to_separable,
    ppt_test,
)
from .states import (
    BipartiteState,
    SchmidtForm,
    max_entangled,
    product_state,
    random_density,
    random_separable,
    schmidt_decompose,
    separable_mixture,
)
from .witness import (
    Witness,
    detects,
    horodecki_entanglement_scan,
    is_block_positive_numeric,
    map_from_witness,
    non_cp_certificate,
    nondecomposability_certificate,
    witness_from_map,
)

__version__ = "0.1.0"
