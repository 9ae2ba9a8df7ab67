"""Small helpers for seeded random streams."""
from __future__ import annotations

import numpy as np

RandomState = "np.random.Generator | np.random.SeedSequence | int"


def as_generator(rng) -> np.random.Generator:
    """Coerce an int seed, a SeedSequence, or a Generator into a Generator.

    Generators pass through untouched so callers keep ownership of the
    stream position.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
