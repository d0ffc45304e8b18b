import numpy as np
import pytest

from pcmeff import Pcm

# 4x4 matrix whose principal eigenvector is inefficient; its reference
# eigenvector (8 digits, truncated) and the dominating second coordinate
EXAMPLE1_ENTRIES = [
    [1.0, 0.5, 4.0, 2.0],
    [2.0, 1.0, 5.0, 7.0],
    [0.25, 0.2, 1.0, 2.0],
    [0.5, 1.0 / 7.0, 0.5, 1.0],
]
EXAMPLE1_W = np.array([0.27471631, 0.53204485, 0.10869376, 0.08454506])
EXAMPLE1_IMPROVED_W2 = 0.54346883

# matching ratio table w_i / w_j, truncated at 4 decimals
EXAMPLE1_RATIOS = np.array([
    [1.0, 0.5163, 2.5274, 3.2493],
    [1.9367, 1.0, 4.8948, 6.2930],
    [0.3956, 0.2042, 1.0, 1.2856],
    [0.3077, 0.1589, 0.7778, 1.0],
])

# arcs of the corresponding dominance digraph (1-based, as drawn)
EXAMPLE1_ARCS_1BASED = {(1, 2), (1, 4), (4, 2), (3, 1), (3, 2), (4, 3)}


@pytest.fixture
def example1() -> Pcm:
    return Pcm(EXAMPLE1_ENTRIES)
