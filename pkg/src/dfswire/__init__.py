"""Decoherence-free subspace wiretap codes.

Kraus channels with an explicit environment, DFS search, error-avoiding
codes, Holevo leakage to the environment and secrecy capacity.
"""

from .capacity import CapacityResult, maximize_holevo, secrecy_capacity_dfs, secrecy_rate_sweep
from .channel import (
    DensityMatrix,
    DilatedChannel,
    QuantumChannel,
    amplitude_damping,
    apply,
    bob_state,
    builtin_collective_dephasing,
    dilate,
    eve_state,
    identity_channel,
)
from .dfs import DfsSubspace, Qeac, SystemOperatorSet, WiretapCode, build_qeac, find_dfs, verify_invariance
from .errors import DfsWireError, NumericalError, ValidationError
from .linalg import gram_schmidt_complete, hermitian_eig, partial_trace, tensor
from .secrecy import Ensemble, PrivacyReport, WiretapVerdict, holevo, privacy, verify_wiretap_code, von_neumann_entropy

__version__ = "0.1.0"
