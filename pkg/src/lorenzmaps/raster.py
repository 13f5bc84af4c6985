"""Binary PGM (P5) output for membership rasters."""

from __future__ import annotations

import numpy as np


def pgm_bytes(img: np.ndarray, comment: str = "") -> bytes:
    """Encode an 8-bit grayscale image (rows x columns) as binary PGM.

    Row 0 is the top scanline.  An optional comment is embedded in the
    header (useful for recording the configuration that produced it).
    """
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("expected a 2-d uint8 array")
    rows, cols = img.shape
    header = "P5\n"
    if comment:
        for line in comment.splitlines():
            header += f"# {line}\n"
    header += f"{cols} {rows}\n255\n"
    return header.encode("ascii") + img.tobytes()


def write_pgm(path: str, img: np.ndarray, comment: str = "") -> None:
    with open(path, "wb") as fh:
        fh.write(pgm_bytes(img, comment=comment))
