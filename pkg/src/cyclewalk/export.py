"""Flat-file writers: CSV tables, plain-text matrices and binary portable pixmaps.

Pixmap orientation: q runs left to right, p runs bottom to top (origin bottom-left).
Intensity is linear in the value and centred on zero, scaled by s = max |value|
(s = 1 for an all-zero grid):

* PGM (grayscale): level = round(127.5 * (1 + v / s)), so 0 maps to 128,
  -s to 0 and +s to 255.
* PPM (signed colour): white at zero, fading to pure red (255, 0, 0) at +s and
  pure blue (0, 0, 255) at -s.
"""
from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np


def fmt(x: float) -> str:
    return repr(float(x))


def write_csv(path: Path, header: list[str], rows) -> Path:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else (str(v) if isinstance(v, (int, np.integer)) else fmt(v))
                              for v in row))
    return _write_text(path, "\n".join(lines) + "\n")


def write_matrix_text(path: Path, values: np.ndarray) -> Path:
    lines = (" ".join(fmt(v) for v in row) for row in np.asarray(values, dtype=float))
    return _write_text(path, "\n".join(lines) + "\n")


def read_matrix_text(path: Path) -> np.ndarray:
    return np.loadtxt(path, ndmin=2)


def _scale(values: np.ndarray) -> float:
    s = float(np.abs(values).max()) if values.size else 0.0
    return s if s > 0 else 1.0


def _image_rows(grid: np.ndarray) -> np.ndarray:
    """grid[q, p] -> image[row, col] with p increasing upward."""
    return np.asarray(grid, dtype=float).T[::-1]


def grayscale_levels(grid: np.ndarray) -> np.ndarray:
    img = _image_rows(grid)
    return np.clip(np.round(127.5 * (1 + img / _scale(img))), 0, 255).astype(np.uint8)


def signed_rgb(grid: np.ndarray) -> np.ndarray:
    img = _image_rows(grid)
    s = np.clip(np.abs(img) / _scale(img), 0, 1)
    fade = np.round(255 * (1 - s)).astype(np.uint8)
    full = np.full_like(fade, 255)
    pos = img >= 0
    r = np.where(pos, full, fade)
    b = np.where(pos, fade, full)
    return np.stack([r, fade, b], axis=-1)


def write_pgm(path: Path, grid: np.ndarray) -> Path:
    levels = grayscale_levels(grid)
    h, w = levels.shape
    return _write_bytes(path, f"P5\n{w} {h}\n255\n".encode() + levels.tobytes())


def write_ppm(path: Path, grid: np.ndarray) -> Path:
    rgb = signed_rgb(grid)
    h, w, _ = rgb.shape
    return _write_bytes(path, f"P6\n{w} {h}\n255\n".encode() + rgb.tobytes())


def read_pnm(path: Path) -> np.ndarray:
    """Minimal reader for the P5/P6 files written above."""
    data = Path(path).read_bytes()
    magic, dims, maxval, body = data.split(b"\n", 3)
    w, h = (int(x) for x in dims.split())
    arr = np.frombuffer(body, dtype=np.uint8)
    return arr.reshape(h, w) if magic == b"P5" else arr.reshape(h, w, 3)


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_text(path: Path, text: str) -> Path:
    return _write_bytes(path, text.encode())


def _write_bytes(path: Path, data: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return path
