"""Deterministic per-replica random streams."""

import numpy as np

# one stream family per experiment kind, so e.g. radius replicas never share
# a stream with the snake oracle at the same size
KIND_TAGS = {"radius": 1, "profile": 2, "looptree": 3, "snake": 4}


def replica_rng(seed, *key):
    """Generator for the replica identified by ``key`` under master ``seed``.

    Streams depend only on (seed, key), never on execution order.
    """
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))
