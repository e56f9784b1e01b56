"""Counter-based random streams.

Every path gets its own ``Philox`` generator keyed by
``(master_seed, tag, path_index[, round])``, so paths are independent of each
other and of the order in which workers process them.
"""

import zlib
from dataclasses import dataclass

import numpy as np


def stream_tag(name: str) -> int:
    """Stable 32-bit tag for a named experiment."""
    return zlib.crc32(name.encode("utf-8"))


def make_stream(master_seed: int, *key: int) -> np.random.Generator:
    """
    Create a generator for one key under a master seed.

    Args:
        master_seed: Run-wide seed
        *key: Non-negative integers identifying the stream

    Returns:
        Independent ``Generator`` backed by ``Philox``
    """
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class PathStreams:
    """Per-path stream factory for one experiment."""

    master_seed: int
    tag: int = 0

    @classmethod
    def named(cls, master_seed: int, name: str) -> "PathStreams":
        return cls(master_seed=master_seed, tag=stream_tag(name))

    def path(self, path_index: int) -> np.random.Generator:
        """Stream that draws the configuration of path ``path_index``."""
        return make_stream(self.master_seed, self.tag, path_index, 0)

    def marks(self, path_index: int, round_index: int = 0) -> np.random.Generator:
        """Stream for marks; separate from :meth:`path` so marks resample freely."""
        return make_stream(self.master_seed, self.tag, path_index, 1, round_index)

    def auxiliary(self, path_index: int) -> np.random.Generator:
        """Stream for any other per-path randomness (lent particle positions)."""
        return make_stream(self.master_seed, self.tag, path_index, 2)
