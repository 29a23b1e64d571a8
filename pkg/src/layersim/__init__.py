"""layersim: random-order layer sampling on graphs.

Sample vertices by independent uniform ages, keep those with fewer than k
younger neighbors, and study what survives: independent sets and forests in
the first layers, giant components from the third layer on, small-graph
treewidth oracles, and site percolation on finite lattice boxes.

Hot kernels run through a compiled extension when available; set
``LAYERSIM_PURE=1`` to force the pure Python backend (same outputs, slower).
"""

from .components import (
    ComponentSummary,
    SegmentStats,
    binary_tree_survival,
    connected_components,
    cycle_segment_stats,
    is_forest,
    is_independent_set,
    max_component_vs_max_monotone,
    monotone_component,
    monotone_component_sizes,
)
from .errors import (
    InvalidModeError,
    InvalidParameterError,
    LayersimError,
    SizeError,
    TieError,
    UnsupportedInputError,
)
from .experiments import ExperimentConfig, ExperimentReport, Verdict, make_graph, run
from .graphs import (
    DegreeSequence,
    Graph,
    complete,
    complete_binary_tree,
    configuration_model,
    cycle,
    cycle_plus_matching,
    d_ary_tree,
    grid_box,
    grid_index,
    induced_subgraph,
    load_graph,
    path,
    random_simple_regular,
    save_graph,
    star_collection,
    subdivide_edges,
)
from .grid import (
    CrossingRectangle,
    GridConfiguration,
    ThetaEstimate,
    annulus_circuit_check,
    coupling_domination_check,
    crossing_duality_check,
    dump_grid_text,
    estimate_theta,
    find_crossing,
    grid_layers,
    parity_split,
    phi_isomorphism_check,
    random_configuration,
    surrounded_check,
    t4_box_experiment,
    verify_crossing,
)
from .kernels import backend_name
from .layers import (
    ages_to_permutation,
    compute_layers,
    degeneracy_order,
    expected_Tk_size,
    induced_Tk,
    load_ages,
    permutation_to_ages,
    sample_ages,
    save_ages,
    site_percolation,
)
from .replay import Diagnosis, replay, save_counterexample
from .rng import make_rng, trial_rng
from .treewidth import (
    AuxiliaryH,
    balanced_separator_exists,
    build_auxiliary_H,
    exact_treewidth,
    giant_component_trial,
    molloy_reed_Q,
    molloy_reed_from_degrees,
    separator_bound_sweep,
    smooth_degree_pair,
    smooth_until_balanced,
    two_stage_treewidth_evidence,
)

__version__ = "0.1.0"
