"""Counter-based random substreams.

Every random quantity in the package is drawn from a Philox stream whose key
is derived from ``(seed, *tags)``.  Draws are laid out row by row with a fixed
stride of counter blocks, so row ``i`` of a stream is a pure function of
``(seed, tags, i)``: generating rows ``[0, n)`` in one call or in any set of
sub-ranges yields bitwise identical values.
"""

from __future__ import annotations

import zlib

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

# Philox emits four 64-bit words per counter increment.
_WORDS_PER_COUNTER = 4
_MAX_CHUNK = 1 << 22


def _tag_to_int(tag) -> int:
    if isinstance(tag, (int, np.integer)):
        if tag < 0:
            raise ValueError(f"negative stream tag {tag}")
        return int(tag)
    return zlib.crc32(str(tag).encode("utf-8"))


def stream_key(seed: int, *tags) -> np.ndarray:
    """128-bit Philox key for the stream named by ``tags`` under ``seed``."""
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    ss = SeedSequence(int(seed), spawn_key=tuple(_tag_to_int(t) for t in tags))
    return ss.generate_state(2, dtype=np.uint64)


def _stride(width: int) -> int:
    return -(-width // _WORDS_PER_COUNTER)


def uniform_rows(seed: int, tags: tuple, start: int, stop: int, width: int) -> np.ndarray:
    """Rows ``start..stop-1`` of a stream, each holding ``width`` U[0,1) draws."""
    if width < 1:
        raise ValueError("width must be positive")
    if stop < start:
        raise ValueError("stop < start")
    count = stop - start
    if count == 0:
        return np.empty((0, width))
    stride = _stride(width)
    key = stream_key(seed, *tags)
    gen = Generator(Philox(key=key, counter=[start * stride, 0, 0, 0]))
    words = stride * _WORDS_PER_COUNTER
    raw = gen.random(count * words).reshape(count, words)
    return np.ascontiguousarray(raw[:, :width])


def iter_uniform_rows(seed: int, tags: tuple, start: int, stop: int, width: int):
    """Yield ``(row_offset, block)`` chunks of :func:`uniform_rows` with bounded memory."""
    step = max(1, _MAX_CHUNK // max(width, 1))
    for lo in range(start, stop, step):
        hi = min(stop, lo + step)
        yield lo, uniform_rows(seed, tags, lo, hi, width)


def open_uniform(u: np.ndarray) -> np.ndarray:
    """Map U[0,1) draws into the open interval (0,1).

    Only an exact zero moves (to 2**-54); shifting every draw would round the
    largest one up to 1.0.
    """
    u = np.asarray(u, dtype=float)
    return np.where(u == 0.0, 2.0**-54, u)
