"""fockkernel: kernel positivity certification, power-series lifts, free-group
word-metric kernels, and constructive Gaussian sup-norm approximation."""

from .errors import (
    AlphabetMismatch,
    DimensionMismatch,
    Divergent,
    DomainMismatch,
    DuplicatePoints,
    EigenFailure,
    FockKernelError,
    GridTooLarge,
    IndexOutOfRange,
    NonRealKernel,
    NotAKernelEvidence,
    NotHermitian,
    OutOfDomain,
    ParseError,
    SeparationFailed,
    SolveFailure,
    WrongForm,
)
from .free_group import (
    EdgeVector,
    GroupWord,
    edge_dist_sq,
    edge_inner,
    enumerate_words,
    haagerup_embed,
    identity,
    inv,
    mul,
    parse_word,
    reduce,
    word_distance,
    word_length,
)
from .kernel_core import (
    GramMatrix,
    KernelSpec,
    Point,
    eval_kernel,
    eval_kernel_real,
    feature_distance_sq,
    gram,
    point_distance,
    read_points,
)
from .kernel_zoo import (
    DiskPoint,
    dot_kernel,
    drury_arveson,
    gaussian,
    haagerup_inner_kernel,
    kernel_from_config,
    ph_base_kernel,
    ph_gaussian,
    pseudo_hyperbolic_distance,
    szego_normalized_overlap,
    word_metric_kernel,
)
from .positivity import (
    CNDCertificate,
    PDCertificate,
    SeparatingFunctional,
    VandermondeReport,
    certify_cnd,
    certify_psd,
    certify_strict,
    find_separating,
    schur_product,
    vandermonde_independence,
)
from .series_lift import (
    LiftedKernel,
    PowerSeries,
    Truncation,
    check_convergence,
    exp_lift,
    gaussian_from_lift,
    lift_eval,
    lifted_kernel_spec,
    tail_bound,
    terms_for_tolerance,
)
from .approximator import (
    ApproxModel,
    ApproxReport,
    CompactGrid,
    default_centers,
    eval_model,
    eval_model_grid,
    fit,
    rescale_exp_to_bump,
    run_experiment,
    sample_grid,
    scaled_dot_kernel,
    sup_error,
)

__version__ = "0.1.0"
