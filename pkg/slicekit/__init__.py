from slicekit.constructions import (  # noqa
    best_counterexample,
    certify,
    indicator_decomposition,
)
from slicekit.junta import minimum_junta, sensitivity_graph  # noqa
from slicekit.recovery import recover_sparse  # noqa
from slicekit.slice_core import slice_degree, slice_domain, truth_table  # noqa
from slicekit.thresholds import build_table, compute_k, compute_W, value_set  # noqa
