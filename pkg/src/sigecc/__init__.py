"""sigecc: significance-aware error-correction coding.

Bayes decoding under symbol-space loss functions and metaheuristic search
for block codebooks over a BPSK/AWGN channel.
"""

__version__ = "0.1.0"

from .channel import (  # noqa: F401
    ChannelModel,
    bpsk_modulate,
    bpsk_quantize,
    estimate_noise_variance,
    snr_db_to_sigma,
    transmit,
)
from .codes import (  # noqa: F401
    Codebook,
    GeneratorMatrix,
    baseline_hadamard_8_3,
    baseline_hamming_7_4,
    baseline_hamming_12_8,
    distance_profile,
    from_generator,
    hamming_distance,
    load_codebook,
    load_generator,
    reference_codebook,
    reference_generator,
    save_codebook,
    save_generator,
)
from .decode import (  # noqa: F401
    DecodeMethod,
    bayes_decode,
    bayes_decode_fast,
    decode_batch,
    hard_decode,
    posterior,
    soft_decode,
)
from .loss import LossSpec  # noqa: F401
from .optimize import (  # noqa: F401
    FitnessConfig,
    SearchConfig,
    SearchFailure,
    SearchResult,
    fitness,
    ga_optimize,
    ga_optimize_linear,
    hill_climb,
    objective_v,
)
from .sim import SimulationConfig, SimulationResult, run, sweep  # noqa: F401
from .symbols import SymbolSpace  # noqa: F401
