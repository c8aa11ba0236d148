"""Named, order-independent random streams.

Every stochastic step draws from its own generator keyed by
``(master_seed, purpose, *indices)``, so the result of a trial does not
depend on the order in which trials are executed.
"""

from __future__ import annotations

import numpy as np

PLACE = 1
MOVE = 2
DISCOVERY = 3
FLOOD_LINKS = 4
COINS = 5
INSTANCES = 6


def stream(master_seed: int, purpose: int, *indices: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(purpose, *map(int, indices)))
    return np.random.Generator(np.random.PCG64(seq))
