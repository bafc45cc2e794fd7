"""Operational nonlocality toolkit for convex operational theories.

Computes single-system certainty bounds, evaluates the steering-based
conditioned-certainty test analytically and by Monte Carlo, decides
local-hidden-state and joint-measurability questions by linear programming,
and reproduces the CHSH bounds and dimension formulas of the framework.
"""

from .bell import (
    Classification,
    ScenarioShape,
    c_nosig,
    chsh_bound_incompat,
    chsh_bound_uncertainty,
    chsh_value,
    classify,
    dim_nosig,
    dim_prob,
    is_nosignaling,
    tsirelson_tau,
)
from .compatibility import (
    FamilyPoint,
    SpekkensMasterTable,
    UnsharpObservable,
    alpha_smearing,
    family_point,
    fine_joint_distribution,
    jointly_measurable_lp,
    jointly_measurable_rebit,
    kappa_from_upsilon,
    kappa_opt,
    kappa_opt_bisect,
    master_effect_lp,
    spekkens_fine_analysis,
    spekkens_master_effect,
    unsharpen,
    upsilon_from_kappa,
)
from .core import (
    Effect,
    Measurement,
    State,
    StateSpace,
    Theory,
    evaluate_effect,
    measure_distribution,
    mix_states,
)
from .lp import LpSolverError
from .protocol import (
    PREPARE_AFTER,
    PREPARE_BEFORE,
    ProtocolConfig,
    ProtocolReport,
    run_protocol,
    summarize,
)
from .steering import (
    Assemblage,
    LhsFeasibilityReport,
    NonlocalityVerdict,
    assemblage_from,
    conditioned_certainty_sum,
    lhs_model_feasible,
    operational_nonlocality_test,
    smeared_assemblage,
    steering_implies_violation_check,
)
from .theories import (
    BIPARTITE_STATES,
    THEORIES,
    BipartiteState,
    Correlation,
    correlation_from,
    gbit_vertex,
    make_classical_bit,
    make_classical_correlated,
    make_gbit,
    make_gdit,
    make_pr_bipartite,
    make_pr_box,
    make_product,
    make_rebit,
    make_singlet,
    make_spekkens,
    make_spekkens_entangled,
    rebit_measurement,
    rebit_state,
    spekkens_state,
)
from .uncertainty import (
    UncertaintyBound,
    certainty_sum,
    max_outcome_prob,
    max_single_setting,
    upsilon_star,
)

__version__ = "0.1.0"
