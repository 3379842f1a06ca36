"""Numerics for catalytic quantum communication with convex-split and embezzling catalysts."""

__version__ = "0.1.0"

from .qmat import (  # noqa: E402
    DensityOperator,
    PureState,
    max_entangled,
    maximally_mixed,
    partial_trace,
    random_full_rank_state,
    tensor,
)
from .distinguish import (  # noqa: E402
    conditional_entropy,
    dmax,
    dmax_feasibility_check,
    ppt_min_eigenvalue,
    purified_distance,
    uhlmann_fidelity,
    von_neumann_entropy,
)
from .channels import KrausChannel, amplitude_damping, apply, choi, dephasing, depolarizing_length  # noqa: E402

__all__ = [
    "DensityOperator",
    "PureState",
    "KrausChannel",
    "amplitude_damping",
    "apply",
    "choi",
    "conditional_entropy",
    "dephasing",
    "depolarizing_length",
    "dmax",
    "dmax_feasibility_check",
    "max_entangled",
    "maximally_mixed",
    "partial_trace",
    "ppt_min_eigenvalue",
    "purified_distance",
    "random_full_rank_state",
    "tensor",
    "uhlmann_fidelity",
    "von_neumann_entropy",
]
