"""Image format and dimension sniffing from file headers.

Only headers are parsed, never pixel data: the downstream filters need
format and dimensions, and full decoding would dominate fetch cost.
"""

from __future__ import annotations

import struct
from typing import Optional


def sniff(data: bytes) -> Optional[tuple[str, int, int]]:
    """Return (format, width, height) or None if the header is not recognized.

    Formats: "jpg", "png", "webp", or "other" for recognizable non-allowed
    types (gif, bmp) whose dimensions still parse.
    """
    if len(data) < 12:
        return None
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return _sniff_png(data)
    if data[:2] == b"\xff\xd8":
        return _sniff_jpeg(data)
    if data[:4] == b"RIFF" and data[8:12] == b"WEBP":
        return _sniff_webp(data)
    if data[:6] in (b"GIF87a", b"GIF89a"):
        width, height = struct.unpack("<HH", data[6:10])
        return ("other", width, height)
    if data[:2] == b"BM" and len(data) >= 26:
        width, height = struct.unpack("<ii", data[18:26])
        return ("other", abs(width), abs(height))
    return None


def _sniff_png(data: bytes) -> Optional[tuple[str, int, int]]:
    if len(data) < 24 or data[12:16] != b"IHDR":
        return None
    width, height = struct.unpack(">II", data[16:24])
    return ("png", width, height)


def _sniff_jpeg(data: bytes) -> Optional[tuple[str, int, int]]:
    # Walk the marker stream until a start-of-frame segment carries the size.
    sof_markers = {0xC0, 0xC1, 0xC2, 0xC3, 0xC5, 0xC6, 0xC7, 0xC9, 0xCA, 0xCB, 0xCD, 0xCE, 0xCF}
    pos = 2
    size = len(data)
    while pos + 4 <= size:
        if data[pos] != 0xFF:
            pos += 1
            continue
        marker = data[pos + 1]
        if marker == 0xFF:
            pos += 1
            continue
        if marker in (0xD8, 0x01) or 0xD0 <= marker <= 0xD7:
            pos += 2
            continue
        if pos + 4 > size:
            return None
        seg_len = struct.unpack(">H", data[pos + 2 : pos + 4])[0]
        if marker in sof_markers:
            if pos + 9 > size:
                return None
            height, width = struct.unpack(">HH", data[pos + 5 : pos + 9])
            return ("jpg", width, height)
        pos += 2 + seg_len
    return None


def _sniff_webp(data: bytes) -> Optional[tuple[str, int, int]]:
    chunk = data[12:16]
    if chunk == b"VP8X" and len(data) >= 30:
        width = int.from_bytes(data[24:27], "little") + 1
        height = int.from_bytes(data[27:30], "little") + 1
        return ("webp", width, height)
    if chunk == b"VP8 " and len(data) >= 30:
        # Lossy bitstream: sync code 9d 01 2a then 14-bit dimensions.
        if data[23:26] != b"\x9d\x01\x2a":
            return None
        width = int.from_bytes(data[26:28], "little") & 0x3FFF
        height = int.from_bytes(data[28:30], "little") & 0x3FFF
        return ("webp", width, height)
    if chunk == b"VP8L" and len(data) >= 25:
        if data[20] != 0x2F:
            return None
        bits = int.from_bytes(data[21:25], "little")
        width = (bits & 0x3FFF) + 1
        height = ((bits >> 14) & 0x3FFF) + 1
        return ("webp", width, height)
    return None
