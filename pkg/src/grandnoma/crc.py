"""CRC codebook: systematic encoding, membership checks, and syndrome tables.

Generator polynomials are given in Koopman notation: the hex value lists the
coefficients of x^degree .. x^1 and the trailing +1 term is implicit, so the
top bit of the value always marks the x^degree term.  Bit vectors are numpy
uint8 arrays, MSB first: bits[0] is the first transmitted bit and carries the
highest polynomial order.

Register conventions are the plain ones: zero initial value, zero final XOR,
no bit reflection, remainder appended after the message.  The all-zero word
is therefore always a codeword.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["CrcSpec", "CrcCode", "koopman_to_normal", "crc_encode", "crc_check", "get_code"]


@dataclass(frozen=True)
class CrcSpec:
    """CRC code parameters: Koopman generator and message/codeword lengths."""

    koopman: int
    message_len: int
    codeword_len: int

    def __post_init__(self):
        if self.message_len < 1:
            raise ValueError(f"message_len must be >= 1, got {self.message_len}")
        if self.degree < 1:
            raise ValueError(
                f"codeword_len ({self.codeword_len}) must exceed message_len ({self.message_len})"
            )
        if self.koopman.bit_length() != self.degree:
            raise ValueError(
                f"Koopman value 0x{self.koopman:x} must have its top bit at x^{self.degree} "
                f"(bit length {self.degree}), got bit length {self.koopman.bit_length()}"
            )

    @property
    def degree(self) -> int:
        return self.codeword_len - self.message_len

    @property
    def rate(self) -> float:
        return self.message_len / self.codeword_len


def koopman_to_normal(spec: CrcSpec) -> np.ndarray:
    """Expand a Koopman generator into the full coefficient vector.

    Returns the degree+1 coefficients of x^degree .. x^0, MSB first.  Both end
    coefficients are 1 by construction.
    """
    full = (spec.koopman << 1) | 1
    return np.array([(full >> i) & 1 for i in range(spec.degree, -1, -1)], dtype=np.uint8)


class CrcCode:
    """Precomputed division tables for one CRC spec.

    The syndrome of an N-bit word is the remainder of its polynomial modulo
    the generator, packed into a plain int (bit degree-1 down to 0).  A word
    belongs to the codebook iff its syndrome is zero.  Because the remainder
    map is linear over GF(2), the syndrome of any word is the XOR of the
    per-position syndromes of its set bits, which is what makes the
    guess-and-check query loop cheap.
    """

    def __init__(self, spec: CrcSpec):
        self.spec = spec
        self.generator = koopman_to_normal(spec)
        degree = spec.degree
        n = spec.codeword_len
        mask = (1 << degree) - 1
        low = ((spec.koopman << 1) | 1) & mask  # generator with the x^degree term dropped
        # position_syndromes[j] = remainder of x^(N-1-j); built by stepping x^i -> x^(i+1)
        table = [0] * n
        s = 1
        for j in range(n - 1, -1, -1):
            table[j] = s
            s <<= 1
            if s >> degree:
                s = (s & mask) ^ low
        self.position_syndromes = table
        self._table_arr = np.asarray(table, dtype=np.uint64)
        self._rem_shifts = np.arange(degree - 1, -1, -1, dtype=np.uint64)

    def syndrome(self, word: np.ndarray) -> int:
        word = np.asarray(word)
        if word.shape != (self.spec.codeword_len,):
            raise ValueError(f"expected word of length {self.spec.codeword_len}, got {word.shape}")
        picked = self._table_arr[word != 0]
        if picked.size == 0:
            return 0
        return int(np.bitwise_xor.reduce(picked))

    def check(self, word: np.ndarray) -> bool:
        return self.syndrome(word) == 0

    def check_words(self, words: np.ndarray) -> np.ndarray:
        """Vectorized membership test for a (num_words, N) bit matrix."""
        words = np.asarray(words)
        masked = np.where(words != 0, self._table_arr[None, :], np.uint64(0))
        return np.bitwise_xor.reduce(masked, axis=1) == 0

    def encode(self, message: np.ndarray) -> np.ndarray:
        message = np.asarray(message, dtype=np.uint8)
        k = self.spec.message_len
        if message.shape != (k,):
            raise ValueError(f"expected message of length {k}, got {message.shape}")
        picked = self._table_arr[:k][message != 0]
        rem = int(np.bitwise_xor.reduce(picked)) if picked.size else 0
        parity = ((np.uint64(rem) >> self._rem_shifts) & np.uint64(1)).astype(np.uint8)
        return np.concatenate([message, parity])


@lru_cache(maxsize=None)
def get_code(spec: CrcSpec) -> CrcCode:
    """Cached table build; CrcSpec is frozen so it hashes cleanly."""
    return CrcCode(spec)


def crc_encode(message: np.ndarray, spec: CrcSpec) -> np.ndarray:
    """Systematic encoding: message bits followed by the division remainder."""
    return get_code(spec).encode(message)


def crc_check(word: np.ndarray, spec: CrcSpec) -> bool:
    """Return True iff `word` is a codeword (zero polynomial remainder)."""
    return get_code(spec).check(word)
