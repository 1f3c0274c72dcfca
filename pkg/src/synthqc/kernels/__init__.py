"""Hot-loop kernels: compiled extension when available, numpy otherwise.

Set SYNTHQC_DISABLE_EXT=1 to force the numpy fallback (used by the
benchmark and the cross-check tests). Both implementations are
bit-identical; only speed differs.
"""

import os

if os.environ.get("SYNTHQC_DISABLE_EXT", "0") == "1":
    from ._fallback import IS_COMPILED, assign_clusters, scan_split_gini, scan_split_variance
else:
    try:
        from ._speedups import (  # type: ignore[attr-defined]
            IS_COMPILED,
            assign_clusters,
            scan_split_gini,
            scan_split_variance,
        )
    except ImportError:
        from ._fallback import (
            IS_COMPILED,
            assign_clusters,
            scan_split_gini,
            scan_split_variance,
        )

__all__ = ["IS_COMPILED", "assign_clusters", "scan_split_gini", "scan_split_variance"]
