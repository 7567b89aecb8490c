"""Header sniffing against handcrafted byte layouts."""

from __future__ import annotations

import struct

import pytest

from mmdocs.imagemeta import sniff


def png_bytes(width: int, height: int) -> bytes:
    return (
        b"\x89PNG\r\n\x1a\n"
        + struct.pack(">I", 13)
        + b"IHDR"
        + struct.pack(">II", width, height)
        + b"\x08\x06\x00\x00\x00"
    )


def jpeg_bytes(width: int, height: int, sof: int = 0xC0, *, exif_first: bool = False) -> bytes:
    out = b"\xff\xd8"
    if exif_first:
        payload = b"Exif\x00\x00" + b"\x00" * 20
        out += b"\xff\xe1" + struct.pack(">H", 2 + len(payload)) + payload
    out += b"\xff\xe0" + struct.pack(">H", 16) + b"JFIF\x00" + b"\x00" * 9
    out += bytes([0xFF, sof]) + struct.pack(">H", 17)
    out += b"\x08" + struct.pack(">HH", height, width) + b"\x03" + b"\x00" * 9
    return out


def webp_vp8x(width: int, height: int) -> bytes:
    return (
        b"RIFF" + b"\x00" * 4 + b"WEBP"
        + b"VP8X" + struct.pack("<I", 10)
        + b"\x00" * 4
        + (width - 1).to_bytes(3, "little")
        + (height - 1).to_bytes(3, "little")
    )


def webp_vp8(width: int, height: int) -> bytes:
    return (
        b"RIFF" + b"\x00" * 4 + b"WEBP"
        + b"VP8 " + struct.pack("<I", 20)
        + b"\x00" * 3
        + b"\x9d\x01\x2a"
        + struct.pack("<HH", width, height)
    )


def webp_vp8l(width: int, height: int) -> bytes:
    bits = (width - 1) | ((height - 1) << 14)
    return (
        b"RIFF" + b"\x00" * 4 + b"WEBP"
        + b"VP8L" + struct.pack("<I", 10)
        + b"\x2f" + struct.pack("<I", bits)
    )


def test_png_dimensions():
    assert sniff(png_bytes(640, 480)) == ("png", 640, 480)


def test_jpeg_baseline():
    assert sniff(jpeg_bytes(640, 480)) == ("jpg", 640, 480)


def test_jpeg_progressive_sof2():
    assert sniff(jpeg_bytes(1024, 768, sof=0xC2)) == ("jpg", 1024, 768)


def test_jpeg_skips_leading_exif_segment():
    assert sniff(jpeg_bytes(300, 150, exif_first=True)) == ("jpg", 300, 150)


def test_jpeg_without_frame_header_unrecognized():
    data = b"\xff\xd8" + b"\xff\xe0" + struct.pack(">H", 16) + b"JFIF\x00" + b"\x00" * 9
    assert sniff(data) is None


def test_webp_extended_header():
    assert sniff(webp_vp8x(2000, 1000)) == ("webp", 2000, 1000)


def test_webp_lossy_bitstream():
    assert sniff(webp_vp8(320, 240)) == ("webp", 320, 240)


def test_webp_lossy_bad_sync_code_rejected():
    data = bytearray(webp_vp8(320, 240))
    data[23] = 0x00
    assert sniff(bytes(data)) is None


def test_webp_lossless_bitstream():
    assert sniff(webp_vp8l(800, 600)) == ("webp", 800, 600)


def test_webp_lossless_bad_signature_rejected():
    data = bytearray(webp_vp8l(800, 600))
    data[20] = 0x30
    assert sniff(bytes(data)) is None


def test_gif_reports_other_format():
    data = b"GIF89a" + struct.pack("<HH", 12, 34) + b"\x00" * 4
    assert sniff(data) == ("other", 12, 34)


def test_bmp_reports_other_with_abs_height():
    # negative height encodes top-down row order
    data = b"BM" + b"\x00" * 16 + struct.pack("<ii", 100, -200)
    assert sniff(data) == ("other", 100, 200)


@pytest.mark.parametrize(
    "data",
    [
        b"",
        b"\x89PNG",
        b"plain text, not an image at all",
        b"\x89PNG\r\n\x1a\n" + b"\x00" * 8 + b"NOPE" + b"\x00" * 8,
        b"RIFF\x00\x00\x00\x00WAVEdata",
    ],
    ids=["empty", "short", "text", "png-bad-chunk", "riff-not-webp"],
)
def test_unrecognized_headers_return_none(data):
    assert sniff(data) is None
