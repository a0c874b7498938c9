"""Graph isomorphism via collapse tomographies and collapse patterns.

Public surface: the graph container and codecs, tomography/pattern
constructors, the certified isomorphism engine, exact symmetry classifiers,
the exhaustive oracle, and the conjecture counterexample suite.
"""

from .graphs import (
    CollapseLayers,
    Extension,
    Graph,
    GraphError,
    MultigraphData,
    NailedGraph,
    bfs_layers,
    collapse,
    complement,
    components,
    edge_degree,
    emit_edge_list,
    emit_graph,
    emit_graph6,
    extension,
    induced_subgraph,
    nailed_graph,
    parse_edge_list,
    parse_edge_list_multigraph,
    parse_graph,
    parse_graph6,
    permute,
)
from .tomography import (
    LabelTable,
    MSet,
    Pattern,
    Tomography,
    all_tomography_keys,
    canonical_key,
    edge_property,
    intern_label,
    match,
    pattern_arc,
    pattern_nailed,
    pattern_normal,
    tomography,
    varied_pattern,
    vertex_property,
)
from .oracle import (
    BudgetExceeded,
    SearchBudget,
    dedup_graphs,
    enumerate_nonisomorphic,
    oracle_automorphisms,
    oracle_iso,
)
from .engine import (
    Constraint,
    EngineConfig,
    IsoOutcome,
    ResourceExhausted,
    Witness,
    extract_mapping,
    gi,
    gi_constrained,
    gi_labeled,
    gi_multigraph,
    verify_mapping,
)
from .symmetry import (
    SearchBudgetError,
    SymmetryReport,
    classify,
    is_arc_symmetric_exact,
    is_edge_regular,
    is_edge_symmetric_exact,
    is_vertex_indistinguishable,
    is_vertex_regular,
    is_vertex_symmetric_exact,
    pattern_symmetry_tests,
)
from .conjectures import (
    ConjectureReport,
    build_corpus,
    check_conjecture_1,
    check_conjecture_2,
    check_conjecture_3,
    check_conjecture_4,
    check_conjecture_5,
    reverify_counterexample,
    run_suite,
)

__version__ = "0.1.0"
