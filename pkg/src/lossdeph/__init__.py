"""Bosonic loss-dephasing channel toolkit.

Classifies the (transmissivity, dephasing) parameter plane of the bosonic
loss-dephasing channel by anti-degradability, non-anti-degradability, and
positive quantum capacity, with explicit recovery-map and two-extension
witnesses and a two-extendibility feasibility solver.
"""

__version__ = "0.1.0"

from .antideg import (
    CriterionOutcome,
    Verdict,
    build_A_matrix,
    diag_dominant,
    eta_d,
    qubit_antideg,
    qubit_degradability_rank,
    simple_condition,
    theta,
    theta_boundary,
    thm1_verdict,
)
from .capacity import (
    RegionVerdict,
    classify_point,
    coherent_info_two_level,
    max_coherent_info_p,
    ppt_min_eigenvalue,
)
from .channels import (
    ChannelParams,
    FrameOperator,
    beam_splitter_fock,
    complementary_apply,
    dephasing_apply,
    generalized_choi,
    loss_dephasing_apply,
    pure_loss_apply,
    qubit_choi,
    qudit_choi,
)
from .extendibility import (
    FeasibilityReport,
    Status,
    lambda_d,
    two_extendible,
)
from .fock import (
    GramFrame,
    HermitianOperator,
    Spectrum,
    binom_weight,
    gram_spectrum,
    hermitian_spectrum,
    partial_trace,
    partial_transpose,
    tensor,
    von_neumann_entropy,
)
from .witnesses import (
    ExtensionState,
    RegionError,
    antideg_map_low_loss,
    antideg_map_region2,
    build_two_extension,
    qutrit_extension_psd,
    verify_antidegrading,
)

__all__ = [name for name in dir() if not name.startswith("_")]
