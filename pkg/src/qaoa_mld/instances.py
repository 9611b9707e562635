"""Small worked detection problems used in examples and tests."""
import numpy as np

from .encoding import ChannelInstance


def single_qubit_example() -> ChannelInstance:
    """``h = 1.2416``, ``s = +1``, ``n = 0.3323``."""
    return ChannelInstance.from_transmission([[1.2416]], [1], [0.3323])


def two_qubit_example() -> ChannelInstance:
    return ChannelInstance.from_transmission(
        [[1.2416, -0.1741], [0.3323, -0.0804]], [-1, 1], [-1.5130, 0.3212]
    )


def three_qubit_example() -> ChannelInstance:
    return ChannelInstance.from_transmission(
        [[1.24155, -0.174105, 0.332349],
         [-0.080418, -1.51301, 0.321184],
         [-1.7771, 1.55398, 0.23342]],
        [-1, 1, 1],
        [-1.703, -1.77439, 1.34985],
    )


def identity_example() -> ChannelInstance:
    """Noiseless-looking 2x2 identity channel with ``y = [1, -1]``."""
    return ChannelInstance(np.eye(2), np.array([1.0, -1.0]), 1.0, np.array([1, -1]))
