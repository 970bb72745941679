"""Domain-separated XOF expansion shared by the client and server paths.

Every pseudorandom bit in this library comes from a single squeeze of an
extendable-output function over ``seed || q || id_seg``: a 288-bit seed,
the 32-bit modulus, and the 16-bit segment index, 336 bits in all.  The
modulus and segment index make every segment's stream independent, which is
what allows segments to be generated in any order, on any engine.

All multi-byte values are little-endian; both the encoder and the word
splitter share the convention so any fixed-width field change shows up in
the golden vectors.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import keccak
from .errors import ConfigError

SEED_BYTES = 36          # 288-bit seed
COMMON_PART_BYTES = 32   # shared seed part of a multi-polynomial key
INPUT_BYTES = 42         # seed || q(4) || id_seg(2)
MAX_INPUT_BYTES = 64     # hard cap; keeps the hash to one absorb block
XOF_BLOCK_BITS = 1344    # SHAKE128 sponge rate: one block per squeeze
XOF_BLOCK_BYTES = XOF_BLOCK_BITS // 8

_WORD_DTYPES = {8: "<u1", 16: "<u2", 32: "<u4"}


@dataclass(frozen=True)
class Seed:
    """An opaque 288-bit generation seed (canonically 36 bytes / 72 hex)."""

    data: bytes

    def __post_init__(self):
        if not isinstance(self.data, bytes) or len(self.data) != SEED_BYTES:
            raise ValueError(f"seed must be exactly {SEED_BYTES} bytes")

    @classmethod
    def from_hex(cls, text: str) -> "Seed":
        text = text.strip()
        if len(text) != 2 * SEED_BYTES:
            raise ValueError(f"seed hex must be {2 * SEED_BYTES} characters")
        return cls(bytes.fromhex(text))

    @classmethod
    def zero(cls) -> "Seed":
        return cls(bytes(SEED_BYTES))

    def hex(self) -> str:
        return self.data.hex()

    def __repr__(self):
        return f"Seed({self.hex()})"


def derive_polynomial_seed(common: bytes, poly_id: int) -> Seed:
    """Build a per-polynomial seed from a 256-bit common part and a 32-bit id.

    One key-switching key carries several polynomials; they share the common
    part and differ only in ``poly_id``, so the full seed stays 288 bits.
    """
    if len(common) != COMMON_PART_BYTES:
        raise ValueError(f"common seed part must be {COMMON_PART_BYTES} bytes")
    if not 0 <= poly_id < 2 ** 32:
        raise ValueError("poly_id must fit in 32 bits")
    return Seed(common + poly_id.to_bytes(4, "little"))


@dataclass(frozen=True)
class XofInput:
    """The domain-separated hash input for one segment of one limb."""

    seed: Seed
    q: int
    id_seg: int

    def encode(self) -> bytes:
        return encode_domain_input(self.seed, self.q, self.id_seg)


def encode_domain_input(seed: Seed, q: int, id_seg: int) -> bytes:
    """Encode ``seed || q || id_seg`` into the fixed 42-byte hash input.

    Injective by construction: all three fields have fixed width.
    """
    if not 0 < q < 2 ** 32:
        raise ValueError("q must be a positive 32-bit value")
    if not 0 <= id_seg < 2 ** 16:
        raise ValueError("id_seg must fit in 16 bits")
    return seed.data + q.to_bytes(4, "little") + id_seg.to_bytes(2, "little")


def _expand_shake128(data: bytes, out_len: int) -> bytes:
    return hashlib.shake_128(data).digest(out_len)


def _expand_kangarootwelve(data: bytes, out_len: int) -> bytes:
    return keccak.kangaroo_twelve(data, b"", out_len)


BACKENDS = {
    "shake128": _expand_shake128,
    "kangarootwelve": _expand_kangarootwelve,
}


def xof_expand(data: bytes, r_bits: int = XOF_BLOCK_BITS, backend: str = "shake128") -> bytes:
    """Produce one r-bit block of XOF output for ``data``.

    One call consumes exactly one block; nothing in the library squeezes a
    second one, mirroring hardware that latches a single sponge output.
    """
    try:
        expand = BACKENDS[backend]
    except KeyError:
        raise ConfigError(f"unknown XOF backend '{backend}'") from None
    if r_bits <= 0 or r_bits % 8 != 0:
        raise ConfigError("block size must be a positive multiple of 8 bits")
    if r_bits > XOF_BLOCK_BITS:
        raise ConfigError(f"block size {r_bits} exceeds the single-squeeze "
                          f"limit of {XOF_BLOCK_BITS} bits")
    if len(data) > MAX_INPUT_BYTES:
        raise ConfigError(f"XOF input longer than {MAX_INPUT_BYTES} bytes")
    return expand(data, r_bits // 8)


def split_words(block: bytes, w: int) -> np.ndarray:
    """Split a block into ``t = floor(len*8 / w)`` little-endian w-bit words.

    Word order is normative: word i occupies bytes [i*w/8, (i+1)*w/8), and
    the rejection scan consumes words strictly in this order.
    """
    if w not in _WORD_DTYPES:
        raise ConfigError(f"unsupported word size {w}; expected one of {sorted(_WORD_DTYPES)}")
    nbytes = w // 8
    t = len(block) // nbytes
    return np.frombuffer(block, dtype=_WORD_DTYPES[w], count=t)
