"""Pixel confusion counts and the TP-rate / TN-rate / accuracy percentages."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .raster import as_mask

__all__ = ["ConfusionCounts", "Rates", "ImageRow", "EvalReport", "confusion", "rates", "aggregate"]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.tp + other.tp, self.fp + other.fp,
                               self.tn + other.tn, self.fn + other.fn)


class Rates(NamedTuple):
    """Percentages; ``None`` marks a rate whose denominator is empty."""

    tp_rate: Optional[float]
    tn_rate: Optional[float]
    accuracy: Optional[float]


def confusion(pred, gt, fov=None) -> ConfusionCounts:
    """Count agreement between a predicted and a ground-truth mask inside ``fov``."""
    pred = as_mask(pred).astype(bool)
    gt = as_mask(gt).astype(bool)
    if pred.shape != gt.shape:
        raise ValueError(f"dimension mismatch: prediction {pred.shape} vs ground truth {gt.shape}")
    if fov is None:
        region = np.ones(pred.shape, dtype=bool)
    else:
        region = as_mask(fov).astype(bool)
        if region.shape != pred.shape:
            raise ValueError(f"dimension mismatch: prediction {pred.shape} vs FOV {region.shape}")
    return ConfusionCounts(
        tp=int(np.count_nonzero(pred & gt & region)),
        fp=int(np.count_nonzero(pred & ~gt & region)),
        tn=int(np.count_nonzero(~pred & ~gt & region)),
        fn=int(np.count_nonzero(~pred & gt & region)),
    )


def _pct(num: int, den: int) -> Optional[float]:
    return 100.0 * num / den if den > 0 else None


def rates(c: ConfusionCounts) -> Rates:
    return Rates(
        tp_rate=_pct(c.tp, c.tp + c.fn),
        tn_rate=_pct(c.tn, c.tn + c.fp),
        accuracy=_pct(c.tp + c.tn, c.total),
    )


@dataclass(frozen=True)
class ImageRow:
    image_id: str
    rates: Rates
    counts: Optional[ConfusionCounts] = None
    seconds: Optional[float] = None


def _mean(values) -> Optional[float]:
    kept = [v for v in values if v is not None]
    return sum(kept) / len(kept) if kept else None


def _fmt(value: Optional[float]) -> str:
    return "undefined" if value is None else f"{value:.2f}"


@dataclass
class EvalReport:
    """Per-image rates plus their unweighted means and, when counts are known, pooled rates."""

    rows: list = field(default_factory=list)
    means: Rates = Rates(None, None, None)
    pooled: Optional[Rates] = None
    label: str = ""

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["image", "tp", "fp", "tn", "fn", "tp_rate", "tn_rate", "accuracy"])
        for row in self.rows:
            c = row.counts
            counts = [c.tp, c.fp, c.tn, c.fn] if c is not None else ["", "", "", ""]
            writer.writerow([row.image_id, *counts, *(_csv_num(v) for v in row.rates)])
        writer.writerow(["mean", "", "", "", "", *(_csv_num(v) for v in self.means)])
        if self.pooled is not None:
            writer.writerow(["pooled", "", "", "", "", *(_csv_num(v) for v in self.pooled)])
        return buf.getvalue()

    def to_table(self) -> str:
        header = ("Image", "TP", "TN", "ACC")
        body = [(r.image_id, _fmt(r.rates.tp_rate), _fmt(r.rates.tn_rate), _fmt(r.rates.accuracy))
                for r in self.rows]
        footer = [("Mean", _fmt(self.means.tp_rate), _fmt(self.means.tn_rate), _fmt(self.means.accuracy))]
        if self.pooled is not None:
            footer.append(("Pooled", _fmt(self.pooled.tp_rate), _fmt(self.pooled.tn_rate),
                           _fmt(self.pooled.accuracy)))
        widths = [max(len(line[i]) for line in [header, *body, *footer]) for i in range(4)]

        def line(cells):
            return "  ".join(cell.ljust(widths[0]) if i == 0 else cell.rjust(widths[i])
                             for i, cell in enumerate(cells))

        rule = "-" * len(line(header))
        out = [self.label] if self.label else []
        out += [line(header), rule, *map(line, body), rule, *map(line, footer)]
        return "\n".join(out) + "\n"


def _csv_num(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.4f}"


def aggregate(rows: Sequence, label: str = "") -> EvalReport:
    """Unweighted column means over per-image rows; undefined entries are skipped.

    ``rows`` may hold :class:`ImageRow` objects or bare :class:`Rates` tuples.
    """
    if not rows:
        raise ValueError("cannot aggregate an empty list of rows")
    rows = [r if isinstance(r, ImageRow) else ImageRow(str(i), Rates(*r)) for i, r in enumerate(rows)]
    means = Rates(*(_mean(r.rates[i] for r in rows) for i in range(3)))
    pooled = None
    if all(r.counts is not None for r in rows):
        total = ConfusionCounts()
        for r in rows:
            total = total + r.counts
        pooled = rates(total)
    return EvalReport(rows=rows, means=means, pooled=pooled, label=label)
