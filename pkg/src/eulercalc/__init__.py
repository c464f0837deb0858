"""Exact Euler calculus of piecewise-linear constructible functions.

Functions on R^n live on hyperplane arrangements (:class:`AffineCF`);
functions on P^n live on central arrangements of R^{n+1}
(:class:`ProjectiveCF`).  All arithmetic is over the rationals.
"""

from .arrangement import (
    Arrangement,
    Cell,
    FacePoset,
    antipodal_pair,
    enumerate_cells,
    face_poset,
    locate,
    naive_cells,
    restrict_to_flat,
)
from .constructible import (
    AffineCF,
    PolyhedronSpec,
    add,
    compose_kernels,
    convolve,
    convolve_np,
    dual,
    epb,
    evaluate,
    external_product,
    gamma_project,
    hom_cf,
    indicator,
    integrate,
    integrate_np,
    multiply,
    pullback,
    pushforward,
    pushforward_np,
    refine_common,
    scale,
)
from .errors import ConsistencyError, EulerCalcError, ResourceError, ValidationError
from .kernels import BACKEND
from .projective import (
    ProjectiveCF,
    dual_proj,
    embed_eim,
    embed_oim,
    hyperplane_indicator,
    integrate_proj,
    point_indicator,
    restrict_chart,
)
from .radon import (
    betti_slice,
    lambda_kernel_check,
    plane_section,
    radon_dual_p2,
    radon_invert_check,
    radon_p2,
    slice_eval_r3,
    slice_integral,
)
from .ratgeom import AffineForm, AffineMap, parse_rational, solve_linear, strict_feasible

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
