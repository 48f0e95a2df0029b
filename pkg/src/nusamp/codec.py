"""Fixed-rate binary coding of sampler descriptors.

Wire format (most-significant bit first inside every byte)::

    magic "NUS1"            4 bytes
    version 0x01            1 byte
    n_grid                  32-bit unsigned, big-endian
    n_segments              32-bit unsigned, big-endian
    extrema count           count_bits bits
    slope sign              1 bit (1 means +1)
    start-value index       start_value_bits bits (uniform quantizer)
    segment mass            64 bits, IEEE-754 binary64, big-endian
    boundaries block        4-bit symbol width, then difference symbols for
                            the n_segments - 1 interior boundary indices
    extrema-times block     4-bit symbol width, then difference symbols for
                            the extrema indices (absent when the count is 0)
    extrema values          count * value_bits bits (uniform quantizer)
    zero padding            to the next byte boundary

Boundary and extrema times are integers on the dense grid, so they are coded
losslessly: each non-decreasing sequence becomes first differences, and a
difference too large for one symbol is spilled into maximal-valued escape
symbols followed by the remainder. Amplitudes go through uniform mid-rise
quantizers over the configured range and are the only lossy part.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DecodeError, EncodingError
from .reconstruction import SamplerDescriptor
from .segmentation import Segmentation
from .signals import ExtremaList

__all__ = [
    "MAGIC",
    "VERSION",
    "CodecConfig",
    "BitWriter",
    "BitReader",
    "quantize_uniform",
    "dequantize_uniform",
    "encode_monotone",
    "decode_monotone",
    "choose_b_diff",
    "encode_descriptor",
    "decode_descriptor",
]

MAGIC = b"NUS1"
VERSION = 1

# The symbol-width field is 4 bits wide, so widths span [1, 15].
_MAX_SYMBOL_BITS = 15


@dataclass(frozen=True)
class CodecConfig:
    """Bit widths and amplitude range of the fixed-rate descriptor coder."""

    count_bits: int = 8
    value_bits: int = 13
    start_value_bits: int = 15
    amp_min: float = -255.0
    amp_max: float = 255.0

    def __post_init__(self):
        for name in ("count_bits", "value_bits", "start_value_bits"):
            bits = getattr(self, name)
            if not 1 <= bits <= 16:
                raise ValueError(f"{name} must be in [1, 16], got {bits}")
        if not self.amp_min < self.amp_max:
            raise ValueError("amplitude range is empty")

    @property
    def amp_range(self) -> tuple[float, float]:
        return (self.amp_min, self.amp_max)


class BitWriter:
    """Accumulates bits most-significant first and flushes to padded bytes."""

    def __init__(self):
        self._chunks = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, nbits: int) -> None:
        if value < 0 or value >> nbits:
            raise EncodingError(f"value {value} does not fit in {nbits} bits")
        self._acc = (self._acc << nbits) | value
        self._nbits += nbits
        while self._nbits >= 8:
            self._nbits -= 8
            self._chunks.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def getvalue(self) -> bytes:
        if self._nbits:
            pad = 8 - self._nbits
            self._chunks.append((self._acc << pad) & 0xFF)
            self._acc = 0
            self._nbits = 0
        return bytes(self._chunks)


class BitReader:
    """Reads most-significant-first bit fields; refuses to read past the end."""

    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0  # bit cursor

    def read(self, nbits: int) -> int:
        end = self._pos + nbits
        if end > 8 * len(self._data):
            raise DecodeError("bitstream ended prematurely")
        value = 0
        pos = self._pos
        while nbits:
            byte = self._data[pos >> 3]
            offset = pos & 7
            take = min(8 - offset, nbits)
            chunk = (byte >> (8 - offset - take)) & ((1 << take) - 1)
            value = (value << take) | chunk
            pos += take
            nbits -= take
        self._pos = pos
        return value


def quantize_uniform(value: float, bits: int, amp_range: tuple[float, float]) -> int:
    """Uniform fixed-rate quantizer index with clamping at the range edges."""
    lo, hi = amp_range
    if bits < 1:
        raise ValueError("quantizer needs at least one bit")
    levels = 1 << bits
    step = (hi - lo) / levels
    index = int(np.floor((value - lo) / step))
    return min(max(index, 0), levels - 1)


def dequantize_uniform(index: int, bits: int, amp_range: tuple[float, float]) -> float:
    """Center of the quantization bin addressed by ``index``."""
    lo, hi = amp_range
    step = (hi - lo) / (1 << bits)
    return lo + (index + 0.5) * step


def _diffs(ints) -> list[int]:
    out = []
    prev = 0
    for v in ints:
        v = int(v)
        d = v - prev
        if d < 0:
            raise ValueError("sequence must be non-decreasing and start at >= 0")
        out.append(d)
        prev = v
    return out


def _symbol_count(diff: int, bits: int) -> int:
    full = (1 << bits) - 1
    if diff <= full - 1:
        return 1
    return 1 + diff // full


def encode_monotone(ints, b_diff: int) -> list[int]:
    """Difference-code a non-decreasing integer sequence into fixed-width symbols.

    A difference small enough for one symbol is emitted directly; larger
    differences spill into maximal-valued escape symbols followed by the
    remainder, so decoding needs no length prefix.
    """
    if not 1 <= b_diff <= _MAX_SYMBOL_BITS:
        raise ValueError(f"symbol width must be in [1, {_MAX_SYMBOL_BITS}]")
    full = (1 << b_diff) - 1
    symbols = []
    for diff in _diffs(ints):
        if diff <= full - 1:
            symbols.append(diff)
        else:
            escapes = diff // full
            symbols.extend([full] * escapes)
            symbols.append(diff - escapes * full)
    return symbols


def decode_monotone(symbols, b_diff: int, count: int) -> list[int]:
    """Invert :func:`encode_monotone`, recovering ``count`` integers."""
    full = (1 << b_diff) - 1
    out = []
    prev = 0
    it = iter(symbols)
    for _ in range(count):
        diff = 0
        for symbol in it:
            if symbol == full:
                diff += full
            else:
                diff += symbol
                break
        else:
            raise DecodeError("symbol stream ended mid-element")
        prev += diff
        out.append(prev)
    return out


def choose_b_diff(ints) -> int:
    """Pick the symbol width minimizing the total encoded bits.

    Brute force over every codable width (1 through 15); ties go to the
    smaller width. Capping the search at the largest difference's bit length
    can miss the optimum (a difference of exactly ``2^b - 1`` needs an escape
    at width ``b`` but a single symbol at ``b + 1``), hence the full sweep.
    """
    diffs = _diffs(ints)
    if not diffs:
        raise ValueError("cannot choose a symbol width for an empty sequence")
    best_bits, best_cost = 1, None
    for bits in range(1, _MAX_SYMBOL_BITS + 1):
        cost = bits * sum(_symbol_count(d, bits) for d in diffs)
        if best_cost is None or cost < best_cost:
            best_bits, best_cost = bits, cost
    return best_bits


def _write_monotone_block(writer: BitWriter, ints) -> None:
    b_diff = choose_b_diff(ints) if len(ints) else 1
    writer.write(b_diff, 4)
    for symbol in encode_monotone(ints, b_diff):
        writer.write(symbol, b_diff)


def _read_monotone_block(reader: BitReader, count: int) -> list[int]:
    b_diff = reader.read(4)
    if b_diff == 0:
        raise DecodeError("symbol width of zero is invalid")
    full = (1 << b_diff) - 1
    out = []
    prev = 0
    for _ in range(count):
        diff = 0
        while True:
            symbol = reader.read(b_diff)
            diff += symbol
            if symbol != full:
                break
        prev += diff
        out.append(prev)
    return out


def encode_descriptor(desc: SamplerDescriptor, cfg: CodecConfig | None = None) -> bytes:
    """Serialize a descriptor into the bit-exact stream described above."""
    cfg = cfg or CodecConfig()
    count = desc.extrema.count
    if count >= (1 << cfg.count_bits):
        raise EncodingError(
            f"{count} extrema do not fit in {cfg.count_bits} bits"
        )
    if desc.n_grid >= 1 << 32 or desc.boundaries.n_segments >= 1 << 32:
        raise EncodingError("grid or segment count exceeds 32 bits")
    interior = desc.boundaries.boundaries[1:-1]
    if interior.size and interior[-1] >= desc.n_grid:
        raise EncodingError("boundary index beyond the grid")
    if count and desc.extrema.indices[-1] >= desc.n_grid:
        raise EncodingError("extremum index beyond the grid")

    writer = BitWriter()
    for byte in MAGIC:
        writer.write(byte, 8)
    writer.write(VERSION, 8)
    writer.write(desc.n_grid, 32)
    writer.write(desc.boundaries.n_segments, 32)
    writer.write(count, cfg.count_bits)
    writer.write(1 if desc.slope_sign > 0 else 0, 1)
    writer.write(
        quantize_uniform(desc.start_value, cfg.start_value_bits, cfg.amp_range),
        cfg.start_value_bits,
    )
    (mass_word,) = struct.unpack(">Q", struct.pack(">d", desc.segment_mass))
    writer.write(mass_word, 64)
    _write_monotone_block(writer, interior)
    if count:
        _write_monotone_block(writer, desc.extrema.indices)
        for value in desc.extrema.values:
            writer.write(
                quantize_uniform(float(value), cfg.value_bits, cfg.amp_range),
                cfg.value_bits,
            )
    return writer.getvalue()


def decode_descriptor(
    data: bytes, cfg: CodecConfig | None = None
) -> tuple[SamplerDescriptor, CodecConfig]:
    """Parse a stream back into a descriptor.

    The stream does not carry the codec configuration; pass the one used at
    encode time (the default mirrors the standard parameter set). It is
    returned alongside the descriptor for downstream reporting.
    """
    cfg = cfg or CodecConfig()
    reader = BitReader(data)
    magic = bytes(reader.read(8) for _ in range(4))
    if magic != MAGIC:
        raise DecodeError(f"bad magic {magic!r}")
    version = reader.read(8)
    if version != VERSION:
        raise DecodeError(f"unsupported version {version}")
    n_grid = reader.read(32)
    n_segments = reader.read(32)
    count = reader.read(cfg.count_bits)
    slope_sign = 1 if reader.read(1) else -1
    start_value = dequantize_uniform(
        reader.read(cfg.start_value_bits), cfg.start_value_bits, cfg.amp_range
    )
    (mass_word,) = struct.unpack(">Q", struct.pack(">Q", reader.read(64)))
    (segment_mass,) = struct.unpack(">d", struct.pack(">Q", mass_word))
    interior = _read_monotone_block(reader, max(n_segments - 1, 0))
    if count:
        ext_indices = _read_monotone_block(reader, count)
        ext_values = [
            dequantize_uniform(reader.read(cfg.value_bits), cfg.value_bits, cfg.amp_range)
            for _ in range(count)
        ]
    else:
        ext_indices, ext_values = [], []
    try:
        desc = SamplerDescriptor(
            boundaries=Segmentation(np.asarray([0, *interior, n_grid], dtype=np.int64)),
            extrema=ExtremaList(
                np.asarray(ext_indices, dtype=np.int64),
                np.asarray(ext_values, dtype=np.float64),
                n_grid,
            ),
            slope_sign=slope_sign,
            start_value=start_value,
            segment_mass=segment_mass,
            n_grid=n_grid,
        )
    except ValueError as exc:
        raise DecodeError(f"stream decodes to an invalid descriptor: {exc}") from exc
    return desc, cfg
