"""
Named random sub-streams derived from one master seed.

Every consumer of randomness (a tree node, a site, a replicate, a method)
asks for its own generator keyed by name, so draws do not depend on the
order in which jobs are scheduled.
"""

import zlib
from typing import Union

import numpy as np

Key = Union[int, str]


def _encode(key: Key) -> int:
    if isinstance(key, (bool, np.bool_)):
        return int(key)
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError(f"Sub-stream keys must be non-negative, got {key}")
        return int(key)
    # crc32 is stable across interpreter runs, unlike hash()
    return zlib.crc32(str(key).encode("utf-8"))


def substream(seed: int, *keys: Key) -> np.random.Generator:
    """
    Returns a generator for the stream named by ``keys`` under ``seed``.

    Args:
        seed (int): Master seed.
        *keys: Names of the sub-stream, e.g. ``("node", "01")`` or
            ``("replicate", 17)``.

    Returns:
        np.random.Generator: Independent generator for that name.
    """
    sequence = np.random.SeedSequence(
        entropy=int(seed), spawn_key=tuple(_encode(k) for k in keys)
    )
    return np.random.default_rng(sequence)


def child_seed(rng: np.random.Generator) -> int:
    """Draws a 63-bit seed from ``rng`` for handing to another component."""
    return int(rng.integers(0, 2**63 - 1))
