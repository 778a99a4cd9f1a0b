"""Ground-state preparation, anyon manipulation and interference protocols."""

from .braiding import (
    ProtocolReport, braid, create_m_pair, e_superposition, fuse, ramsey_circuit, ramsey_experiment,
    run_on_engines, self_statistics_circuit, self_statistics_experiment,
)
from .cluster import (
    ClusterPattern, ClusterResult, FixupUnsolvableError, build_cluster_pattern,
    cluster_stabilizers, prepare_via_cluster,
)
from .engines import (
    ENGINES, DegenerateCodeError, ground_state_circuit, new_state, prepare_ground_state, syndrome,
)

__all__ = [
    "ProtocolReport", "braid", "create_m_pair", "e_superposition", "fuse", "ramsey_experiment",
    "run_on_engines", "self_statistics_experiment", "ramsey_circuit", "self_statistics_circuit",
    "ClusterPattern", "ClusterResult", "FixupUnsolvableError", "build_cluster_pattern",
    "cluster_stabilizers", "prepare_via_cluster",
    "ENGINES", "DegenerateCodeError", "ground_state_circuit", "new_state", "prepare_ground_state",
    "syndrome",
]
