"""Sequential (recyclable) quantum telecloning with unsharp Bell measurements."""

from telecloning.analysis import (
    ManResult,
    ScenarioConfig,
    closed_fidelity,
    closed_fidelity_eta,
    man,
    man_boundary,
    min_lambda,
    p_kernel,
)
from telecloning.entanglement import (
    Bipartition,
    MonogamyQuery,
    ln_recycled_closed,
    log_negativity,
    monogamy_score,
    negativity,
)
from telecloning.linalg import DensityMatrix, SubsystemLayout
from telecloning.measurement import AcceptanceMask, kraus_set, weak_bell_povm
from telecloning.protocol import (
    ChannelState,
    FidelityReport,
    RoundSchedule,
    avg_fidelity,
    fresh_channel,
    recycle,
    run_schedule,
    teleported_state,
)
from telecloning.states import (
    DisentangleParams,
    InputQubit,
    PureState,
    bell_state,
    disentangle,
    symmetric_state,
    telecloning_state,
    two_design_states,
)

__version__ = "0.1.0"

__all__ = [
    "AcceptanceMask",
    "Bipartition",
    "ChannelState",
    "DensityMatrix",
    "DisentangleParams",
    "FidelityReport",
    "InputQubit",
    "ManResult",
    "MonogamyQuery",
    "PureState",
    "RoundSchedule",
    "ScenarioConfig",
    "SubsystemLayout",
    "avg_fidelity",
    "bell_state",
    "closed_fidelity",
    "closed_fidelity_eta",
    "disentangle",
    "fresh_channel",
    "kraus_set",
    "ln_recycled_closed",
    "log_negativity",
    "man",
    "man_boundary",
    "min_lambda",
    "monogamy_score",
    "negativity",
    "p_kernel",
    "recycle",
    "run_schedule",
    "symmetric_state",
    "telecloning_state",
    "teleported_state",
    "two_design_states",
    "weak_bell_povm",
]
