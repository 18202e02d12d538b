#!/usr/bin/env python3
"""Regenerates tests/fixtures/phash: images written by Pillow plus expected.csv.

Hashes are computed from Pillow's own decode of each file with numpy and
scipy, so the C++ decoders and hash are checked against an unrelated stack.
"""
import csv
import pathlib

import numpy as np
from PIL import Image
from scipy.fft import dct

OUT = pathlib.Path(__file__).resolve().parent / "phash"


def area_matrix(n_in, n_out=32):
    # m[o, i] = share of output o covered by input sample i.
    m = np.zeros((n_out, n_in))
    scale = n_in / n_out
    for o in range(n_out):
        lo, hi = o * scale, (o + 1) * scale
        for i in range(n_in):
            m[o, i] = max(0.0, min(i + 1, hi) - max(i, lo)) / scale
    return m


def phash(rgb):
    rgb = rgb.astype(np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    h, w = y.shape
    small = area_matrix(h) @ y @ area_matrix(w).T
    c = dct(dct(small, axis=0, norm="ortho"), axis=1, norm="ortho")[:8, :8].copy()
    c[0, 0] = np.median(c.flatten()[1:])
    m = np.median(c)
    bits = 0
    for k, v in enumerate(c.flatten()):
        if v > m:
            bits |= 1 << (63 - k)
    return bits


def make(w, h, seed):
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:h, 0:w]
    img = np.zeros((h, w, 3))
    for ch in range(3):
        for _ in range(4):
            fx, fy, ph = rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0), rng.uniform(0, 6.3)
            img[..., ch] += np.sin(2 * np.pi * (fx * xx / w + fy * yy / h) + ph)
    img += rng.normal(0, 0.3, img.shape)
    img = (img - img.min()) / (img.max() - img.min()) * 255
    return img.astype(np.uint8)


def main():
    OUT.mkdir(exist_ok=True)
    rows = []
    for name, w, h, seed in [("wave", 64, 48, 1), ("wide", 200, 150, 2), ("odd", 33, 97, 3)]:
        pixels = make(w, h, seed)
        for ext in ["png", "bmp", "tiff", "gif"]:
            path = OUT / f"{name}.{ext}"
            Image.fromarray(pixels, "RGB").save(path)
            decoded = np.asarray(Image.open(path).convert("RGB"))
            rows.append((path.name, f"{phash(decoded):016x}"))
    with open(OUT / "expected.csv", "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["file", "phash"])
        writer.writerows(rows)


if __name__ == "__main__":
    main()
