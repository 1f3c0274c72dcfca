"""synthqc: utility scoring for synthetic tabular data.

Quantifies how faithfully a synthetic table reproduces a real one with
four broad metrics (Hellinger, pairwise correlation difference,
log-cluster, propensity), aggregates them into a single PCA-based score,
and runs a full generator-evaluation protocol over splits and ensembles.
"""

__version__ = "0.1.0"

from .metrics import MetricConfig, MetricVector, metric_vector
from .tabular import Table, load_csv, write_csv
from .upca import UpcaModel, fit_upca, project

__all__ = [
    "MetricConfig",
    "MetricVector",
    "Table",
    "UpcaModel",
    "fit_upca",
    "load_csv",
    "metric_vector",
    "project",
    "write_csv",
    "__version__",
]
