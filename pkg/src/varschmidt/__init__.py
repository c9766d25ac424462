"""Variational Schmidt decomposition of bipartite pure states.

Two local circuits are trained until both subsystems produce identical
measurement outcomes; the coincident-outcome probabilities are then the
squared Schmidt coefficients, and the adjoint circuits rebuild the Schmidt
vectors.  Includes an exact SVD oracle, a gate-free SWAP protocol, a state
compressor, and a synthesizer for states with a prescribed spectrum.
"""

from .ansatz import (
    AnsatzConfig,
    adjoint_circuit,
    apply_split_circuit,
    build_circuit,
    circuit_unitary,
    format_circuit,
    split_params,
)
from .entropy import renyi_bits, von_neumann_bits
from .oracle import ExactSchmidt, exact_entropy, exact_schmidt
from .protocols import (
    SpectrumSpec,
    decode,
    encode,
    index_swapped,
    swap_without_connection,
    synthesize_state,
)
from .seeding import derive_seed
from .states import (
    ame_state,
    bell_state,
    ghz_state,
    load_state,
    product_state,
    random_state,
)
from .statevec import (
    Gate,
    PureState,
    apply_gate,
    fidelity,
    from_amplitudes,
    probabilities,
    sample,
    save_state,
    zero_state,
)
from .variational import (
    SchmidtResult,
    TrainingReport,
    UntrainedCircuitError,
    cost_exact,
    cost_sampled,
    extract_schmidt,
    gradient,
    reconstruct_eigenvectors,
    reconstruction_fidelity,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "AnsatzConfig",
    "ExactSchmidt",
    "Gate",
    "PureState",
    "SchmidtResult",
    "SpectrumSpec",
    "TrainingReport",
    "UntrainedCircuitError",
    "adjoint_circuit",
    "ame_state",
    "apply_gate",
    "apply_split_circuit",
    "bell_state",
    "build_circuit",
    "circuit_unitary",
    "cost_exact",
    "cost_sampled",
    "decode",
    "derive_seed",
    "encode",
    "exact_entropy",
    "exact_schmidt",
    "extract_schmidt",
    "fidelity",
    "format_circuit",
    "from_amplitudes",
    "ghz_state",
    "gradient",
    "index_swapped",
    "load_state",
    "probabilities",
    "product_state",
    "random_state",
    "reconstruct_eigenvectors",
    "reconstruction_fidelity",
    "renyi_bits",
    "sample",
    "save_state",
    "split_params",
    "swap_without_connection",
    "synthesize_state",
    "train",
    "von_neumann_bits",
    "zero_state",
]
