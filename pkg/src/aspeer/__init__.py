"""AS-aware peer selection for P2P live streaming overlays.

Builds a scale-free AS graph, replays peer joins under the MH, MD, MPH and
IMPH selection policies, and tracks the hop-weighted inter-AS traffic
(congestion degree) of the resulting overlay.
"""

from .errors import ConfigurationError, InsufficientCapacity, InvariantError
from .topology import (
    AsTopology,
    all_pairs_hops,
    dump_edge_list,
    generate_ba_topology,
    load_edge_list,
    topology_stats,
)
from .model import (
    CandidateView,
    Flow,
    NodeKind,
    SystemState,
    candidate_view,
    commit_join,
    init_system,
    record_failure,
)
from .selection import (
    STRATEGIES,
    allocate_from_head,
    imph_partition,
    order_imph,
    order_md,
    order_mh,
    order_mph,
    select,
)
from .metrics import MetricsSample, congestion_degree, diagnostics
from .harness import (
    MetricsSeries,
    RunConfig,
    emit_csv,
    emit_svg,
    read_csv,
    run,
    run_scripted,
    smooth,
    sweep,
)

__version__ = "0.1.0"
