import numpy as np
import pytest

from zspeedl.datasets import make_synthetic_bundle


@pytest.fixture(scope="session")
def tiny_bundle():
    """Minimal fixture: N=60, d=8, C=6 (2 unseen), a=4."""
    return make_synthetic_bundle(n_classes=6, n_unseen=2, n_per_class=10,
                                 feature_dim=8, attribute_dim=4, seed=0)


@pytest.fixture(scope="session")
def rich_bundle():
    """Fixture with verified perfect cross-class transfer for every method."""
    return make_synthetic_bundle(n_classes=8, n_unseen=2, n_per_class=15,
                                 feature_dim=16, attribute_dim=6, noise=0.01,
                                 seed=3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
