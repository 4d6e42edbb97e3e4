import numpy as np


def seed_sequence(seed) -> np.random.SeedSequence:
    """Accept an int, a list of ints, ``None`` or an existing ``SeedSequence``."""
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)
