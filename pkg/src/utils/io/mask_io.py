"""
Чтение и запись масок.

Canonical format is binary PGM (P5):

    "P5" WS width WS height WS maxval SINGLE-WS raster

where WS is any run of whitespace and '#' comments (to end of line), maxval is
1..65535, and the raster holds width*height samples, one byte each when
maxval < 256, else two bytes big-endian. A sample > 127 is foreground.
Other image suffixes are read and written through Pillow with the same rule.
"""
import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from src.models.mask import BinaryMask
from src.utils.errors import MaskFormatError

logger = logging.getLogger(__name__)

PGM_SUFFIXES = {".pgm", ".pnm", ""}
FOREGROUND_THRESHOLD = 127
_WHITESPACE = b" \t\r\n\v\f"


def _next_token(data: bytes, pos: int, path: str) -> Tuple[bytes, int]:
    """Skip whitespace and comments, return the next header token and the position after it."""
    n = len(data)
    while pos < n:
        byte = data[pos:pos + 1]
        if byte in _WHITESPACE:
            pos += 1
        elif byte == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            break
    if pos >= n:
        raise MaskFormatError("unexpected end of header", offset=pos, path=path)
    start = pos
    while pos < n and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, name: str, path: str) -> Tuple[int, int]:
    token, end = _next_token(data, pos, path)
    if not token.isdigit():
        raise MaskFormatError(f"{name} is not a positive integer: {token!r}", offset=end - len(token), path=path)
    return int(token), end


def parse_pgm(data: bytes, path: str = "") -> BinaryMask:
    """Decode a P5 byte string into a mask."""
    if data[:2] != b"P5":
        raise MaskFormatError(f"bad magic {data[:2]!r}, expected b'P5'", offset=0, path=path)
    pos = 2
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE + b"#":
        raise MaskFormatError("missing whitespace after magic", offset=pos, path=path)

    width, pos = _header_int(data, pos, "width", path)
    height, pos = _header_int(data, pos, "height", path)
    maxval, pos = _header_int(data, pos, "maxval", path)
    if width < 1 or height < 1:
        raise MaskFormatError(f"image size {width}x{height} is empty", offset=pos, path=path)
    if not 1 <= maxval <= 65535:
        raise MaskFormatError(f"maxval {maxval} outside 1..65535", offset=pos, path=path)
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise MaskFormatError("missing whitespace before raster", offset=pos, path=path)
    pos += 1

    sample_bytes = 1 if maxval < 256 else 2
    expected = width * height * sample_bytes
    payload = data[pos:pos + expected]
    if len(payload) < expected:
        raise MaskFormatError(
            f"truncated raster: {len(payload)} of {expected} bytes", offset=pos + len(payload), path=path
        )

    dtype = np.uint8 if sample_bytes == 1 else np.dtype(">u2")
    samples = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return BinaryMask(samples > FOREGROUND_THRESHOLD)


def encode_pgm(mask: BinaryMask) -> bytes:
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
    return header + (mask.bits.astype(np.uint8) * 255).tobytes()


def read_mask(path: Union[str, Path]) -> BinaryMask:
    """Read a mask file; PGM natively, other formats through Pillow."""
    path = Path(path)
    if path.suffix.lower() in PGM_SUFFIXES:
        return parse_pgm(path.read_bytes(), str(path))
    try:
        with Image.open(path) as image:
            gray = np.asarray(image.convert("L"))
    except (UnidentifiedImageError, OSError) as e:
        raise MaskFormatError(f"cannot decode image: {e}", path=str(path)) from e
    return BinaryMask(gray > FOREGROUND_THRESHOLD)


def write_mask(path: Union[str, Path], mask: BinaryMask) -> Path:
    """Write a mask; .pgm (or no suffix) as P5, anything else through Pillow."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix.lower() in PGM_SUFFIXES:
        path.write_bytes(encode_pgm(mask))
    else:
        Image.fromarray(mask.bits.astype(np.uint8) * 255).save(path)
    logger.debug("Mask %dx%d written to %s", mask.width, mask.height, path)
    return path
