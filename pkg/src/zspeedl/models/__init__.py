from .base import ZslEstimator
from .eszsl import ESZSL
from .sae import SAE
from .dap import DAP
from .dem import DEM
from .generative import (
    AttributeDecoder,
    DecoderAugmentedClassifier,
    GaussianFeatureGenerator,
    SoftmaxClassifier,
    generate_unseen,
)

__all__ = [
    "AttributeDecoder",
    "DAP",
    "DEM",
    "DecoderAugmentedClassifier",
    "ESZSL",
    "GaussianFeatureGenerator",
    "SAE",
    "SoftmaxClassifier",
    "ZslEstimator",
    "generate_unseen",
]
