"""Privacy amplification for quantum encodings, Born-rule subsampling, and
small Kraus channels: closed-form calculators, seeded simulators, and exact
or search-based empirical audits."""

from .bounds import (
    INF,
    DpParams,
    QdpParams,
    encoding_adp_delta,
    encoding_gaussian_variance,
    encoding_laplace_scale,
    eps_depolarizing,
    eps_pad,
    eps_pad_dep,
    eps_unital_dobrushin,
    mean_concentration_failure,
    postprocess_amplify,
    quantum_to_classical,
    subsample_adp,
    subsample_amplify,
)
from .channels import (
    BlochRep,
    ChannelSpec,
    KrausChannel,
    apply,
    apply_matrix,
    bloch_rep,
    build_channel,
    choi,
    compose,
    depolarize_exact,
    depolarizing_channel,
    dobrushin_estimate,
    doeblin_check,
    doeblin_to_dobrushin,
    gad_channel,
    identity_channel,
    pad_channel,
    pd_channel,
    unitary_channel,
)
from .encodings import (
    Dataset,
    EncodingSpec,
    are_neighbors,
    encode,
    gamma,
    kernel,
    min_adjacent_kernel,
)
from .errors import (
    InsufficientNeighborhoodError,
    ResourceLimitError,
    UnsupportedDimensionError,
    ValidationError,
)
from .linalg import (
    DensityMatrix,
    Povm,
    PureState,
    binary_povm,
    bloch_vector,
    is_psd,
    operator_norm_inf,
    povm_probabilities,
    trace_distance,
    trace_norm,
)
from .mechanisms import (
    NoiseSpec,
    RandomStream,
    born_weights,
    l2_sample,
    laplace_density_ratio_bound,
    measurement_mean,
    noisy_query,
    randomized_response,
    randomized_response_probs,
    sample_noise,
)
from .audit import (
    AuditReport,
    IdentityOutput,
    MechanismModel,
    PerEntryRandomizedResponse,
    SearchSettings,
    audit_channel_qdp,
    audit_classical,
    audit_subsampling_theorem,
    born_weights_exact,
    hockey_stick,
    phase_flip_neighbors,
    randomized_response_model,
    subsampled_model,
    witness_ratio,
    worst_case_measurement_ratio,
)

__version__ = "0.1.0"
