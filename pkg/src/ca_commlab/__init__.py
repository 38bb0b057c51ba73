"""1D cellular automata and the communication complexity of their dynamics."""

from .rules import (
    GuardError,
    Rule,
    canonicalize,
    from_json,
    from_wolfram,
    load_rule,
    make_rule,
    pad_radius,
    save_rule,
    to_json,
)
from .words import (
    CyclicWord,
    PerturbedConfig,
    Word,
    apply_local,
    collapse,
    cyclic,
    iterate_local,
    step_cyclic,
    step_perturbed,
    word,
)
from .algebra import (
    Embedding,
    LayerSpec,
    RescaleParams,
    SimulationWitness,
    is_subautomaton,
    make_layered_rule,
    pack_cyclic,
    pack_word,
    product,
    project_layer,
    rescale,
    simulates,
    unpack_cyclic,
    unpack_word,
)
from .analysis import XOR, dependency_width, is_linear, is_reversible
from .problems import (
    BackgroundOrbit,
    InvasionVerdict,
    OrbitSignature,
    background_orbit,
    cycle_length,
    cycle_pred,
    diff_extent,
    invasion,
    make_instance,
    pred,
    register_invasion_decider,
    replay_no_invasion,
)
from .commcomp import (
    CcReport,
    FoolingSet,
    PredMatrix,
    Problem,
    build_matrix,
    cc_profile,
    check_fooling_set,
    exact_cc,
    linear_protocol_pred,
    one_round_cc,
    reference_matrix,
)
from . import audit, gallery, netpbm

__version__ = "0.1.0"

# rule-specific invasion deciders are part of the default configuration
audit.register_elementary_deciders()
