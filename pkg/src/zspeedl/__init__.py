"""Zero-shot learning inference and benchmarking toolkit.

Implements the classic projection-based ZSL methods (ESZSL, SAE, DAP, DEM)
and the inference side of the generative family (gaussian feature generator
plus softmax / decoder-augmented classifiers), together with restricted and
generalized evaluation, a per-sample latency microbenchmark harness, and a
CLI for reproducible experiments.
"""

__version__ = "0.1.0"

from .errors import DataError, FormatError, NumericalError, UsageError, ZspeedlError
from .arrayio import read_array, write_array
from .data import DatasetBundle, SplitSpec, load_manifest, view_split
from .evaluate import GzslScores, gzsl_eval, mca

__all__ = [
    "DataError",
    "DatasetBundle",
    "FormatError",
    "GzslScores",
    "NumericalError",
    "SplitSpec",
    "UsageError",
    "ZspeedlError",
    "gzsl_eval",
    "load_manifest",
    "mca",
    "read_array",
    "view_split",
    "write_array",
    "__version__",
]
