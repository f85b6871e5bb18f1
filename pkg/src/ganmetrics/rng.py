"""Reproducible randomness kernel.

All random draws in this package come from one pinned pipeline so that a
(seed, purpose) pair produces identical results on every platform:

* Raw words: Philox4x64-10, a counter-based generator with published
  constants (Salmon et al. 2011), as implemented by ``numpy.random.Philox``.
  The raw 64-bit output stream is a pure function of the key.
* Uniform doubles: ``u = ((word >> 11) + 1) * 2**-53``, i.e. the top 53 bits
  mapped to (0, 1].  The +1 keeps log(u) finite.
* Bounded integers: masked rejection sampling (draw ``word & mask`` with
  ``mask = 2**bound.bit_length() - 1``, retry while >= bound), which is
  unbiased and consumes a deterministic, content-independent word sequence.
* Sampling without replacement: partial Fisher-Yates over row indices.
* Gaussians: Box-Muller on uniform pairs,
  ``z0 = sqrt(-2 ln u1) cos(2 pi u2)``, ``z1 = sqrt(-2 ln u1) sin(2 pi u2)``,
  with the z0 block emitted before the z1 block.

Stream keys are derived by mixing a user seed with string/integer labels
through SplitMix64 (Steele et al. 2014) and FNV-1a: decorrelated streams for
"real"/"fake" sides, repeat indices, and so on, without seed bookkeeping.

The integer layers above are bit-exact everywhere.  The Gaussian layer also
depends on the platform libm's rounding of log/cos/sin, which agrees across
common platforms but is not formally guaranteed to the last ulp.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF

# SplitMix64 constants.
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MULT1 = 0xBF58476D1CE4E5B9
_SM_MULT2 = 0x94D049BB133111EB

# FNV-1a 64-bit constants.
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def splitmix64(x: int) -> int:
    """One SplitMix64 step: advance by the golden gamma, then mix."""
    z = (x + _SM_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _SM_MULT1) & _MASK64
    z = ((z ^ (z >> 27)) * _SM_MULT2) & _MASK64
    return z ^ (z >> 31)


def _fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def derive_key(seed: int, *parts: int | str) -> int:
    """Derive a 64-bit stream key from a seed and a sequence of labels.

    Each label (UTF-8 string hashed with FNV-1a, or nonnegative integer taken
    verbatim) is folded in with a SplitMix64 step, so ``derive_key(s, "real")``
    and ``derive_key(s, "fake")`` index decorrelated Philox streams.
    """
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    h = splitmix64(seed & _MASK64)
    for part in parts:
        if isinstance(part, str):
            v = _fnv1a64(part.encode("utf-8"))
        elif isinstance(part, (int, np.integer)):
            if part < 0:
                raise ValueError(f"integer label must be nonnegative, got {part}")
            v = int(part) & _MASK64
        else:
            raise TypeError(f"label must be str or int, got {type(part).__name__}")
        h = splitmix64(h ^ v)
    return h


class WordStream:
    """Buffered reader over the raw Philox4x64-10 word stream for one key."""

    _BUFFER = 1 << 14

    def __init__(self, key: int):
        if key < 0:
            raise ValueError(f"key must be nonnegative, got {key}")
        self._bitgen = np.random.Philox(key=key)
        self._buf = np.empty(0, dtype=np.uint64)
        self._pos = 0

    def words(self, count: int) -> np.ndarray:
        """Next `count` raw 64-bit words, in stream order."""
        out = np.empty(count, dtype=np.uint64)
        filled = 0
        while filled < count:
            if self._pos == len(self._buf):
                self._buf = self._bitgen.random_raw(max(self._BUFFER, count - filled))
                self._pos = 0
            take = min(count - filled, len(self._buf) - self._pos)
            out[filled : filled + take] = self._buf[self._pos : self._pos + take]
            self._pos += take
            filled += take
        return out

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) via masked rejection."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        mask = (1 << bound.bit_length()) - 1
        while True:
            if self._pos == len(self._buf):
                self._buf = self._bitgen.random_raw(self._BUFFER)
                self._pos = 0
            candidate = int(self._buf[self._pos]) & mask
            self._pos += 1
            if candidate < bound:
                return candidate


def uniform_open_closed(stream: WordStream, count: int) -> np.ndarray:
    """`count` float64 uniforms in (0, 1], 53-bit resolution."""
    words = stream.words(count)
    return ((words >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * 2.0**-53


def standard_normal(key: int, count: int) -> np.ndarray:
    """`count` standard normal float64 draws for the given stream key."""
    stream = WordStream(key)
    pairs = (count + 1) // 2
    u = uniform_open_closed(stream, 2 * pairs)
    u1, u2 = u[:pairs], u[pairs:]
    radius = np.sqrt(-2.0 * np.log(u1))
    theta = (2.0 * np.pi) * u2
    z = np.concatenate([radius * np.cos(theta), radius * np.sin(theta)])
    return z[:count]


def permutation_prefix(n: int, n_take: int, key: int) -> np.ndarray:
    """First `n_take` entries of a Fisher-Yates shuffle of range(n).

    The full-shuffle case (`n_take == n`) is a uniform permutation; smaller
    `n_take` consumes exactly the same word prefix, so extending a draw keeps
    the earlier selections.
    """
    if not 0 < n_take <= n:
        raise ValueError(f"need 0 < n_take <= n, got n_take={n_take}, n={n}")
    stream = WordStream(key)
    idx = np.arange(n, dtype=np.int64)
    for i in range(min(n_take, n - 1)):
        j = i + stream.randbelow(n - i)
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:n_take]
