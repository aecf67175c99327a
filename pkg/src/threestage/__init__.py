"""Monte Carlo simulator for the multi-photon three-stage QKD protocol over
noisy network topologies, with exact closed-form oracles validating the
stochastic engine.
"""

__version__ = "0.1.0"

from .channels import (
    CollectiveRotationSpec,
    InvalidChannelError,
    KrausChannel,
    LossyOutcome,
    NoiseConfig,
    NumericalDegeneracyError,
    amplitude_damping,
    apply_channel,
    attenuate,
    attenuation_survival,
    bit_flip,
    bit_phase_flip,
    collective_rotation,
    dephasing,
    noise_stack,
    photon_survives,
    sample_trajectory,
)
from .network import (
    Graph,
    NoPathError,
    Path,
    TopologySpec,
    bfs_shortest_path,
    build_topology,
    effective_distance,
    endpoints,
    route,
)
from .protocol import (
    DecodeFailure,
    PhotonOutcome,
    StageAngles,
    TransmissionRecord,
    encode_bit,
    majority_decode,
    three_stage_photon,
    three_stage_trajectory,
    transmit_burst,
)
from .qcore import (
    ComplexMat2,
    DensityMatrix,
    PureState,
    Unitary,
    apply_unitary,
    commutator,
    density_from_pure,
    measure_z,
    prob_one,
    rotation,
)
from .streams import DrawStream, generator
from .theory import (
    CommutatorReport,
    ad_commutator_e0,
    ad_commutator_e1,
    cr_error_probability,
    cr_error_sign_variant,
    three_stage_exact,
)
