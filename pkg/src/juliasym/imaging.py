"""Colouring rasters and writing PPM / PNG images with JSON sidecars."""

from __future__ import annotations

import colorsys
import json
from pathlib import Path
from typing import Optional

import numpy as np

from .dynamics import Raster, pixel_grid

BLACK = (0, 0, 0)
RED = (220, 30, 30)
BLUE = (40, 80, 230)


def _stretch(raster: Raster) -> np.ndarray:
    """Escape counts mapped to [0, 1] on a log scale between the fastest and slowest escapes."""
    it = np.log(np.maximum(raster.iterations, 1).astype(float))
    esc = raster.escaped
    if not esc.any():
        return np.zeros_like(it)
    lo, hi = it[esc].min(), it[esc].max()
    return np.clip((it - lo) / max(hi - lo, 1e-12), 0.0, 1.0)


def _ramp(t: np.ndarray, far, near) -> np.ndarray:
    far, near = np.asarray(far, float), np.asarray(near, float)
    s = np.sqrt(t)[:, None]
    return np.round(far + (near - far) * s).astype(np.uint8)


def _labels(raster: Raster) -> np.ndarray:
    """0 undecided, 1 escaped, 2+ one label per settling point."""
    lab = np.zeros((raster.height, raster.width), dtype=np.int64)
    lab[raster.escaped] = 1
    conv = raster.converged & ~raster.escaped
    if conv.any():
        key = np.round(_settled(raster)[conv] * 1e6)
        _, inv = np.unique(np.stack([key.real, key.imag], axis=1), axis=0, return_inverse=True)
        lab[conv] = 2 + inv.ravel()
    return lab


def _settled(raster: Raster) -> np.ndarray:
    return raster.cycle_mean if raster.cycle_mean is not None else raster.final


def julia_mask(raster: Raster) -> np.ndarray:
    """Pixels drawn as the Julia set: undecided orbits, escaped pixels whose
    distance estimate is under one pixel, and pixels on a boundary between
    different outcomes (4-neighbourhood)."""
    lab = _labels(raster)
    mask = lab == 0
    if raster.distance is not None:
        with np.errstate(invalid="ignore"):
            mask |= raster.escaped & (raster.distance < raster.pixel_size)
    dx = lab[:, 1:] != lab[:, :-1]
    dy = lab[1:, :] != lab[:-1, :]
    mask[:, 1:] |= dx
    mask[:, :-1] |= dx
    mask[1:, :] |= dy
    mask[:-1, :] |= dy
    return mask


def color_julia(raster: Raster) -> np.ndarray:
    """RGB image: Julia set black, escaped pixels pale-to-deep blue by escape
    time, settled orbits hued by the point they settled on."""
    H, W = raster.height, raster.width
    img = np.zeros((H, W, 3), dtype=np.uint8)
    esc = raster.escaped
    img[esc] = _ramp(_stretch(raster)[esc], (240, 244, 252), (25, 45, 140))
    conv = raster.converged & ~esc
    if conv.any():
        f = _settled(raster)[conv]
        hue = (np.angle(f) / (2 * np.pi)) % 1.0
        light = 0.35 + 0.3 * (np.abs(f) / (1 + np.abs(f)))
        rgb = np.array([colorsys.hls_to_rgb(h, l, 0.75) for h, l in zip(hue, light)])
        img[conv] = np.round(255 * rgb).astype(np.uint8)
    img[julia_mask(raster)] = 0
    return img


def color_parameter_plane(raster: Raster, overlay=None) -> np.ndarray:
    """Escaped parameters shaded by escape time; bounded ones black; overlay burned in."""
    H, W = raster.height, raster.width
    img = np.zeros((H, W, 3), dtype=np.uint8)
    esc = raster.escaped
    img[esc] = _ramp(_stretch(raster)[esc], (250, 246, 230), (200, 90, 10))
    if overlay is not None:
        burn_overlay(img, raster.window, overlay)
    return img


def burn_overlay(img: np.ndarray, window, overlay) -> None:
    H, W = img.shape[:2]
    lam = pixel_grid(window, (W, H))
    step = float(window[2]) / W
    if overlay.unit_circle:
        ring = np.abs(np.abs(lam) - 1) <= 0.75 * step
        img[ring] = BLUE
    if overlay.origin:
        dot = np.abs(lam) <= max(1.5 * step, 0.02)
        if not dot.any():
            i, j = np.unravel_index(np.argmin(np.abs(lam)), lam.shape)
            if abs(lam[i, j]) <= step:
                dot[i, j] = True
        img[dot] = RED


def ppm_bytes(img: np.ndarray) -> bytes:
    H, W = img.shape[:2]
    return f"P6\n{W} {H}\n255\n".encode() + np.ascontiguousarray(img, dtype=np.uint8).tobytes()


def write_ppm(path, img: np.ndarray) -> None:
    Path(path).write_bytes(ppm_bytes(img))


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = []
    pos = 0
    while len(parts) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        parts.append(data[pos:end])
        pos = end
    if parts[0] != b"P6" or int(parts[3]) != 255:
        raise ValueError("only 8-bit binary PPM (P6) is supported")
    W, H = int(parts[1]), int(parts[2])
    pix = np.frombuffer(data[pos + 1:pos + 1 + 3 * W * H], dtype=np.uint8)
    return pix.reshape(H, W, 3).copy()


def write_png(path, img: np.ndarray) -> None:
    try:
        from PIL import Image
    except ImportError as exc:
        raise RuntimeError("PNG output needs Pillow; use --format ppm") from exc
    Image.fromarray(img, "RGB").save(path, format="PNG", optimize=False)


def write_image(path, img: np.ndarray, fmt: str = "ppm") -> None:
    if fmt == "ppm":
        write_ppm(path, img)
    elif fmt == "png":
        write_png(path, img)
    else:
        raise ValueError(f"unknown image format {fmt!r}")


def raster_record(raster: Raster, extra: Optional[dict] = None) -> dict:
    rec = {
        "window": {"cx": raster.window[0], "cy": raster.window[1], "width": raster.window[2]},
        "resolution": [raster.width, raster.height],
        "max_iter": raster.max_iter,
        "escaped_pixels": int(raster.escaped.sum()),
        "settled_pixels": int((raster.converged & ~raster.escaped).sum()),
        "params": raster.params,
    }
    if extra:
        rec.update(extra)
    return rec


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def write_json(path, obj) -> None:
    Path(path).write_text(dump_json(obj))
