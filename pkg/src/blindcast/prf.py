"""Keyed counter-mode pseudorandom streams.

Every random choice in the simulator is a pure function of a 256-bit master
key and an integer address (stream tag, node id, index).  Any value can be
recomputed at any index without generating earlier ones, which is what lets
simulations re-run, fan out across threads, and stay bit-identical.

Derivation is two-stage: a keyed BLAKE2b hash maps (key, tag, node) to a
64-bit subkey, and a splitmix64 finalizer turns (subkey, index) into the
output word.  The hash stage gives cross-stream separation; the finalizer
stage is cheap enough to vectorise with numpy over millions of indices.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# Stream tags. Distinct tags give independent-looking streams for the same
# (key, node, index) address.
STREAM_SYNC = 0
STREAM_TS_BASE = 1
STREAM_TS_PHASE = 2
STREAM_GEN = 3

KEY_BYTES = 32


def mix64(x: int) -> int:
    """splitmix64 finalizer: a full-avalanche permutation of 64-bit words."""
    x &= MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


def mix64_np(x: np.ndarray, copy: bool = True) -> np.ndarray:
    """Vectorised mix64 over a uint64 array (wrapping arithmetic).

    With copy=False the input array is consumed in place; callers pass a
    fresh temporary on the hot paths.
    """
    x = x.astype(np.uint64, copy=copy)
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


@lru_cache(maxsize=1 << 18)
def subkey(master_key: bytes, stream_tag: int, v: int) -> int:
    """64-bit per-(stream, node) key, derived by keyed hashing."""
    h = hashlib.blake2b(
        stream_tag.to_bytes(2, "little") + v.to_bytes(16, "little"),
        key=master_key,
        digest_size=8,
    )
    return int.from_bytes(h.digest(), "little")


def uniform64(master_key: bytes, stream_tag: int, v: int, j: int) -> int:
    """Uniform 64-bit word at address (key, tag, v, j); stateless."""
    if j < 0:
        raise ValueError("index must be nonnegative")
    return mix64(subkey(master_key, stream_tag, v) + (j + 1) * GOLDEN)


def uniform64_block(
    master_key: bytes, stream_tag: int, v: int, j0: int, n: int
) -> np.ndarray:
    """Uniform words at indices j0 .. j0+n-1 of one stream, as uint64[n]."""
    sk = np.uint64(subkey(master_key, stream_tag, v))
    idx = np.arange(j0 + 1, j0 + n + 1, dtype=np.uint64)
    return mix64_np(sk + idx * np.uint64(GOLDEN))


def subkey_array(master_key: bytes, stream_tag: int, ids) -> np.ndarray:
    """Column vector of subkeys for a list of node ids, as uint64[k, 1]."""
    sks = np.array([subkey(master_key, stream_tag, v) for v in ids], dtype=np.uint64)
    return sks[:, None]


def derive_key(master_key: bytes, label: bytes, index: int) -> bytes:
    """Child 256-bit key for (label, index); used for trials and candidates."""
    h = hashlib.blake2b(
        label + index.to_bytes(8, "little"), key=master_key, digest_size=KEY_BYTES
    )
    return h.digest()


def fingerprint(key: bytes) -> str:
    """Short stable hex fingerprint of a key, for logs and CSV rows."""
    return hashlib.blake2b(key, digest_size=8).hexdigest()
