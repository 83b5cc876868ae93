"""Entanglement witnesses and positive maps built from the realignment and PPT criteria."""

from .criteria import CriterionResult, ppt_check, realignment_check
from .linalg import Dims, partial_transpose, realign, realign_inverse, svd, trace_norm
from .maps import (
    LinearMap,
    detection_value,
    dual,
    from_witness,
    indecomposability_certificate,
    positivity_check,
    tang_dual,
    tang_map,
    to_witness,
)
from .states import (
    DensityMatrix,
    horodecki_2x4,
    noisy_mixture,
    random_density,
    random_ppt_symmetric,
    random_pure_product,
    upb_tiles_bes,
    werner_2x2,
)
from .witness import (
    Witness,
    evaluate,
    optimize_witness,
    ppt_witness,
    product_extremum,
    projection_witness,
    realignment_witness,
)

__version__ = "0.1.0"
