"""p-adic Hardy-type operators on radial functions and their sharp constants."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .functions import (
    Certified,
    Constant,
    ExtremizerSpec,
    NormParams,
    Power,
    RadialShellFunction,
    SBFunction,
    Zero,
    ball_mean,
    cmo_norm,
    cmo_norm_pow,
    herz_norm,
    herz_norm_pow,
    make_extremizer,
    pointwise_combine,
    radialize,
    to_sb,
    weighted_lq_norm,
    weighted_lq_norm_pow,
)
from .operators import (
    ShellOperatorResult,
    apply_operator,
    commutator_hardy,
    commutator_hardy_adjoint,
    commutator_hlp,
    hardy_adjoint_apply,
    hardy_apply,
    hlp_apply,
    inner_product,
    maximal_apply,
)
from .padic import (
    Ball,
    PAdicScalar,
    PAdicVector,
    Relation,
    Sphere,
    ball_measure,
    ball_relation,
    ball_sphere_intersection_measure,
    is_prime,
    sphere_measure,
)
from .sharp import (
    SharpConstantQuery,
    adjoint_norm,
    commutator_bound_suite,
    extremizer_convergence_study,
    hardy_sharp_constant,
    hlp_sharp_constant,
    rayleigh_ratio,
    spectral_lower_bound,
)
