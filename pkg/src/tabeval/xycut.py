"""Recursive XY-cut segmentation of binarized page images."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import BBox


@dataclass(frozen=True)
class XYCutConfig:
    """Knobs for page segmentation and the downstream crop pipeline.

    min_area: regions smaller than this many pixels are not split further.
    gap_threshold: minimum width in pixels of a background band to cut along.
    binarization_threshold: luminance in [0, 1] below which a pixel is ink.
    pad_detect / pad_structure: crop padding used when handing detected
    regions to downstream models; they do not affect the cut itself.
    """

    min_area: int = 1000
    gap_threshold: int = 10
    binarization_threshold: float = 0.5
    pad_detect: float = 10.0
    pad_structure: float = 100.0


@dataclass(frozen=True)
class PixelPage:
    """A page as a binary ink mask of shape (height, width)."""

    width: int
    height: int
    mask: np.ndarray

    def __post_init__(self) -> None:
        if self.mask.shape != (self.height, self.width):
            raise ValueError(
                f"mask shape {self.mask.shape} does not match page "
                f"{self.height}x{self.width}"
            )

    @classmethod
    def from_image(cls, path: str, binarization_threshold: float = 0.5) -> "PixelPage":
        """Load an image file and binarize it: dark pixels are ink."""
        from PIL import Image

        with Image.open(path) as img:
            gray = np.asarray(img.convert("L"), dtype=np.float64) / 255.0
        mask = gray < binarization_threshold
        h, w = mask.shape
        return cls(width=w, height=h, mask=mask)


def _tighten(mask: np.ndarray, y0: int, y1: int, x0: int, x1: int):
    """Shrink the half-open window to the ink it contains; None if blank."""
    sub = mask[y0:y1, x0:x1]
    ys = np.flatnonzero(sub.any(axis=1))
    if ys.size == 0:
        return None
    xs = np.flatnonzero(sub.any(axis=0))
    return (y0 + int(ys[0]), y0 + int(ys[-1]) + 1,
            x0 + int(xs[0]), x0 + int(xs[-1]) + 1)


def _widest_gap(profile: np.ndarray) -> tuple[int, int] | None:
    """Widest run of background strictly inside an ink profile.

    The profile is boolean with ink at both ends (the region is tight).
    Returns (start, length) of the first widest run, or None if solid.
    """
    ink = np.flatnonzero(profile)
    if ink.size < 2:
        return None
    spans = np.diff(ink) - 1
    best = int(spans.max())
    if best <= 0:
        return None
    at = int(np.argmax(spans))
    return int(ink[at]) + 1, best


def xycut(page: PixelPage, cfg: XYCutConfig | None = None) -> list[BBox]:
    """Recursively split the page along background bands.

    At each step the widest qualifying gap wins; a horizontal band (Y cut)
    wins ties against a vertical one. Regions below min_area stop splitting
    but are still reported. Leaves come out in reading order: top to bottom,
    then left to right.

    Returns:
        Tight bounding boxes of the leaf regions; empty for a blank page.
    """
    if cfg is None:
        cfg = XYCutConfig()
    region = _tighten(page.mask, 0, page.height, 0, page.width)
    if region is None:
        return []
    out: list[BBox] = []
    _split(page.mask, region, cfg, out)
    return out


def _split(mask: np.ndarray, region: tuple[int, int, int, int],
           cfg: XYCutConfig, out: list[BBox]) -> None:
    y0, y1, x0, x1 = region
    if (y1 - y0) * (x1 - x0) >= cfg.min_area:
        sub = mask[y0:y1, x0:x1]
        gap_y = _widest_gap(sub.any(axis=1))
        gap_x = _widest_gap(sub.any(axis=0))
        if gap_y is not None and gap_y[1] < cfg.gap_threshold:
            gap_y = None
        if gap_x is not None and gap_x[1] < cfg.gap_threshold:
            gap_x = None
        if gap_y is not None or gap_x is not None:
            # Y wins ties so stacked blocks split before side-by-side ones.
            if gap_x is None or (gap_y is not None and gap_y[1] >= gap_x[1]):
                start, length = gap_y
                first = _tighten(mask, y0, y0 + start, x0, x1)
                second = _tighten(mask, y0 + start + length, y1, x0, x1)
            else:
                start, length = gap_x
                first = _tighten(mask, y0, y1, x0, x0 + start)
                second = _tighten(mask, y0, y1, x0 + start + length, x1)
            for piece in (first, second):
                if piece is not None:
                    _split(mask, piece, cfg, out)
            return
    out.append(BBox(float(x0), float(y0), float(x1), float(y1)))
