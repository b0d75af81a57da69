import numpy as np
import pytest

from src.models.mask import BinaryMask
from src.utils.errors import MaskFormatError
from src.utils.io import encode_pgm, parse_pgm, read_mask, write_mask


@pytest.fixture
def random_mask(rng):
    return BinaryMask(rng.random((37, 52)) > 0.5)


@pytest.mark.parametrize("name", ["mask.pgm", "mask.png", "nested/dir/mask.bmp"])
def test_round_trip(random_mask, tmp_path, name):
    path = write_mask(tmp_path / name, random_mask)
    np.testing.assert_array_equal(read_mask(path).bits, random_mask.bits)


def test_all_foreground():
    mask = parse_pgm(b"P5\n3 2\n255\n" + b"\xff" * 6)
    assert mask.bits.shape == (2, 3)
    assert mask.bits.all()


def test_threshold():
    mask = parse_pgm(b"P5 4 1 255\n" + bytes([0, 127, 128, 255]))
    assert mask.bits.tolist() == [[False, False, True, True]]


def test_header_comments_and_whitespace():
    data = b"P5 # written by hand\n3\t# width\n 2 \r\n255\n" + bytes([0, 255, 0, 255, 0, 255])
    assert parse_pgm(data).bits.tolist() == [[False, True, False], [True, False, True]]


def test_sixteen_bit_samples():
    data = b"P5\n3 1\n65535\n" + bytes([0x00, 0x00, 0x00, 0x7F, 0xFF, 0x00])
    assert parse_pgm(data).bits.tolist() == [[False, False, True]]


def test_encode_header():
    data = encode_pgm(BinaryMask(np.eye(2, dtype=bool)))
    assert data == b"P5\n2 2\n255\n\xff\x00\x00\xff"


def test_truncated_raster():
    data = encode_pgm(BinaryMask(np.ones((4, 4), dtype=bool)))[:-3]
    with pytest.raises(MaskFormatError) as exc_info:
        parse_pgm(data, "short.pgm")
    assert exc_info.value.offset == len(data)
    assert "short.pgm" in str(exc_info.value)


@pytest.mark.parametrize(
    "data, offset",
    [
        (b"P2\n1 1\n255\n\x00", 0),
        (b"P51 1\n255\n\x00", 2),
        (b"P5\n1 1\n0\n\x00", None),
        (b"P5\n0 1\n255\n", None),
        (b"P5\nx 1\n255\n\x00", 3),
        (b"P5\n1 1\n255", None),
        (b"P5\n1 1\n", None),
    ],
)
def test_bad_header(data, offset):
    with pytest.raises(MaskFormatError) as exc_info:
        parse_pgm(data)
    if offset is not None:
        assert exc_info.value.offset == offset


def test_undecodable_image(tmp_path):
    path = tmp_path / "mask.png"
    path.write_bytes(b"not an image")
    with pytest.raises(MaskFormatError):
        read_mask(path)
