"""End-to-end segmentation, single-stage runs and dataset evaluation.

Per image: green channel -> Frangi vesselness -> threshold -> one of

* ``frangi-only`` -- the thresholded response is the segmentation
* ``cf``          -- connectivity scores, then score threshold
* ``cf+close``    -- as ``cf``, followed by a morphological closing
* ``lscf``        -- local-sensitive connectivity scores, then score threshold
"""
from __future__ import annotations

import json
import logging
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .config import PipelineConfig
from .connectivity import connectivity_filter, ls_connectivity_filter, render_scores, score_threshold
from .metrics import EvalReport, ImageRow, aggregate, confusion, rates
from .morphology import close
from .raster import RasterTypeError, load_image, save_gray, save_mask, threshold, to_gray
from .vesselness import frangi_multiscale

log = logging.getLogger(__name__)

__all__ = [
    "STAGES",
    "Segmentation",
    "Manifest",
    "PipelineError",
    "segment",
    "load_mask",
    "load_scores",
    "run_segment",
    "run_stage",
    "pair_dataset",
    "run_dataset",
]

STAGES = ("frangi", "threshold", "cf", "lscf", "close", "render", "eval")


class PipelineError(RuntimeError):
    pass


@dataclass
class Segmentation:
    gray: np.ndarray
    frangi: np.ndarray
    binary: np.ndarray
    mask: np.ndarray
    scores: Optional[np.ndarray] = None
    repaired: Optional[np.ndarray] = None


def segment(image, cfg: PipelineConfig = PipelineConfig()) -> Segmentation:
    """Run the configured method on a color or gray image held in memory."""
    gray = to_gray(image)
    response = frangi_multiscale(gray, cfg.frangi)
    binary = threshold(response, cfg.frangi_threshold)
    t = cfg.lscf.score_threshold
    if cfg.method == "frangi-only":
        return Segmentation(gray, response, binary, mask=binary)
    if cfg.method == "lscf":
        repaired, scores = ls_connectivity_filter(binary, cfg.lscf)
        return Segmentation(gray, response, binary, score_threshold(scores, t), scores, repaired)
    scores = connectivity_filter(binary, cfg.lscf.connectivity)
    mask = score_threshold(scores, t)
    if cfg.method == "cf+close":
        mask = close(mask, dilations=cfg.dilations, erosions=cfg.erosions)
    return Segmentation(gray, response, binary, mask, scores)


class Manifest:
    """Reproducibility record kept as ``manifest.json`` in an output directory."""

    NAME = "manifest.json"

    def __init__(self, out_dir, cfg: PipelineConfig):
        self.out_dir = Path(out_dir)
        self.path = self.out_dir / self.NAME
        self.data = {"tool": "vesselkit", "version": __version__, "config": cfg.snapshot(),
                     "runs": [], "outputs": []}
        if self.path.exists():
            try:
                previous = json.loads(self.path.read_text())
                self.data["runs"] = previous.get("runs", [])
                self.data["outputs"] = previous.get("outputs", [])
            except json.JSONDecodeError:
                log.warning("ignoring unreadable manifest %s", self.path)

    def record(self, stage: str, inputs, outputs, seconds: float, **extra) -> None:
        outs = [str(Path(p).relative_to(self.out_dir)) for p in outputs]
        self.data["runs"].append({"stage": stage, "inputs": [str(p) for p in inputs],
                                  "outputs": outs, "seconds": round(seconds, 4), **extra})
        for o in outs:
            if o not in self.data["outputs"]:
                self.data["outputs"].append(o)

    def write(self) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self.data, indent=2, sort_keys=True) + "\n")
        return self.path


def load_mask(path, lenient: bool = False) -> np.ndarray:
    """Read a binary mask stored as 0/255 (or 0/1).

    With ``lenient`` any gray or color image is accepted and pixels at or
    above half range become white; otherwise a non-binary file is a type error.
    """
    img = load_image(path)
    if lenient:
        gray = to_gray(img) if img.ndim == 2 else img.max(axis=2)
        return (gray >= (1 if gray.max() <= 1 else 128)).astype(np.uint8)
    if img.ndim != 2:
        raise RasterTypeError(f"{path}: expected a binary mask, got a color image")
    values = set(np.unique(img).tolist())
    if values <= {0, 255}:
        return (img == 255).astype(np.uint8)
    if values <= {0, 1}:
        return img.astype(np.uint8)
    raise RasterTypeError(f"{path}: expected a binary mask (values 0/255), found other intensities")


def load_scores(path) -> np.ndarray:
    path = Path(path)
    try:
        scores = np.load(path, allow_pickle=False)
    except (OSError, ValueError) as exc:
        raise PipelineError(f"{path}: cannot read score map ({exc})") from exc
    if scores.ndim != 2 or not np.issubdtype(scores.dtype, np.integer) or (scores < 0).any():
        raise RasterTypeError(f"{path}: expected a 2D map of non-negative integer scores")
    return scores.astype(np.int64, copy=False)


def _save_scores(scores: np.ndarray, path: Path) -> None:
    np.save(path, scores.astype(np.int64), allow_pickle=False)


def _write_segmentation(seg: Segmentation, stem: str, out_dir: Path, fmt: str) -> list:
    written = []

    def put(kind, arr, saver):
        path = out_dir / f"{stem}_{kind}.{fmt}"
        saver(arr, path)
        written.append(path)

    put("frangi", seg.frangi, save_gray)
    put("binary", seg.binary, save_mask)
    if seg.scores is not None:
        path = out_dir / f"{stem}_scores.npy"
        _save_scores(seg.scores, path)
        written.append(path)
        put("render", render_scores(seg.scores), save_gray)
    if seg.repaired is not None:
        put("repaired", seg.repaired, save_mask)
    put("mask", seg.mask, save_mask)
    return written


def run_segment(image_path, cfg: PipelineConfig, out_dir, fmt: str = "png") -> tuple:
    """Segment one image file, write every intermediate, and update the manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out_dir, cfg)
    start = time.perf_counter()
    seg = segment(load_image(image_path), cfg)
    written = _write_segmentation(seg, Path(image_path).stem, out_dir, fmt)
    manifest.record("segment", [image_path], written, time.perf_counter() - start, method=cfg.method)
    manifest.write()
    return seg, written


def run_stage(stage: str, inputs, cfg: PipelineConfig, out_dir, fmt: str = "png") -> list:
    """Run a single pipeline stage on files and return the paths written.

    ======== ============================ =========================================
    stage    inputs                       outputs
    ======== ============================ =========================================
    frangi   image                        ``<stem>_frangi``
    threshold gray image                  ``<stem>_binary``
    cf       binary mask                  ``<stem>_scores.npy``, ``<stem>_mask``
    lscf     binary mask                  scores, ``<stem>_repaired``, ``<stem>_mask``
    close    binary mask                  ``<stem>_closed``
    render   scores (``.npy``)            ``<stem>_render``
    eval     prediction, truth, [fov]     ``eval.csv``, ``eval.txt``
    ======== ============================ =========================================
    """
    if stage not in STAGES:
        raise PipelineError(f"unknown stage {stage!r}; expected one of {STAGES}")
    inputs = [Path(p) for p in inputs]
    expected = (2, 3) if stage == "eval" else (1,)
    if len(inputs) not in expected:
        raise PipelineError(f"stage {stage} takes {' or '.join(map(str, expected))} input file(s), got {len(inputs)}")
    for p in inputs:
        if not p.exists():
            raise PipelineError(f"{p}: input does not exist")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out_dir, cfg)
    start = time.perf_counter()
    stem = inputs[0].stem
    t = cfg.lscf.score_threshold
    written = []

    def target(kind):
        path = out_dir / f"{stem}_{kind}.{fmt}"
        written.append(path)
        return path

    if stage == "frangi":
        save_gray(frangi_multiscale(to_gray(load_image(inputs[0])), cfg.frangi), target("frangi"))
    elif stage == "threshold":
        img = load_image(inputs[0])
        if img.ndim != 2:
            raise RasterTypeError(f"{inputs[0]}: threshold expects a gray image")
        save_mask(threshold(img, cfg.frangi_threshold), target("binary"))
    elif stage in ("cf", "lscf"):
        mask = load_mask(inputs[0])
        if stage == "cf":
            scores = connectivity_filter(mask, cfg.lscf.connectivity)
        else:
            repaired, scores = ls_connectivity_filter(mask, cfg.lscf)
        path = out_dir / f"{stem}_scores.npy"
        _save_scores(scores, path)
        written.append(path)
        if stage == "lscf":
            save_mask(repaired, target("repaired"))
        save_mask(score_threshold(scores, t), target("mask"))
    elif stage == "close":
        save_mask(close(load_mask(inputs[0]), dilations=cfg.dilations, erosions=cfg.erosions),
                  target("closed"))
    elif stage == "render":
        save_gray(render_scores(load_scores(inputs[0])), target("render"))
    else:
        pred = load_mask(inputs[0])
        gt = load_mask(inputs[1], lenient=True)
        fov = load_mask(inputs[2], lenient=True) if len(inputs) == 3 else None
        counts = confusion(pred, gt, fov)
        report = aggregate([ImageRow(stem, rates(counts), counts)])
        for suffix, text in (("csv", report.to_csv()), ("txt", report.to_table())):
            path = out_dir / f"eval.{suffix}"
            path.write_text(text)
            written.append(path)

    manifest.record(stage, inputs, written, time.perf_counter() - start)
    manifest.write()
    return written


def pair_dataset(cfg: PipelineConfig) -> list:
    """Resolve ``(image_id, image, truth, fov)`` tuples from the dataset layout.

    Images without a ground-truth file are skipped with a warning.
    """
    layout = cfg.dataset
    if layout.image_dir is None or layout.gt_dir is None:
        raise PipelineError("dataset layout needs image_dir and gt_dir")
    image_dir, gt_dir = Path(layout.image_dir), Path(layout.gt_dir)
    for d in (image_dir, gt_dir):
        if not d.is_dir():
            raise PipelineError(f"{d}: dataset directory does not exist")
    pattern = re.compile(layout.image_pattern)
    candidates = sorted(p for p in image_dir.iterdir() if p.is_file())
    if not candidates:
        raise PipelineError(f"{image_dir}: no images found")
    pairs = []
    for path in candidates:
        m = pattern.search(path.name)
        if m is None:
            continue
        image_id = m.group("id")
        gt = gt_dir / layout.gt_template.format(id=image_id)
        if not gt.is_file():
            log.warning("skipping %s: no ground truth at %s", path.name, gt)
            continue
        fov = None
        if layout.fov_dir is not None and layout.fov_template is not None:
            fov = Path(layout.fov_dir) / layout.fov_template.format(id=image_id)
            if not fov.is_file():
                log.warning("%s: no FOV mask at %s, evaluating the full frame", path.name, fov)
                fov = None
        pairs.append((image_id, path, gt, fov))
    if not pairs:
        raise PipelineError(f"{image_dir}: no image could be paired with a ground truth")
    return pairs


def _evaluate_one(job):
    image_id, image_path, gt_path, fov_path, cfg = job
    start = time.perf_counter()
    seg = segment(load_image(image_path), cfg)
    seconds = time.perf_counter() - start
    gt = load_mask(gt_path, lenient=True)
    fov = load_mask(fov_path, lenient=True) if fov_path is not None else None
    return image_id, seg.mask, confusion(seg.mask, gt), (confusion(seg.mask, gt, fov) if fov is not None else None), seconds


def run_dataset(cfg: PipelineConfig, out_dir, fmt: str = "png") -> tuple:
    """Segment and score every paired image of a dataset.

    Writes per-image masks, ``report_full.{csv,txt}`` (whole frame) and, when
    FOV masks are available, ``report_fov.{csv,txt}``. Returns the FOV report
    when one exists, the full-frame report otherwise, plus the manifest.
    """
    pairs = pair_dataset(cfg)
    out_dir = Path(out_dir)
    (out_dir / "masks").mkdir(parents=True, exist_ok=True)
    manifest = Manifest(out_dir, cfg)
    jobs = [(i, img, gt, fov, cfg) for i, img, gt, fov in pairs]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_evaluate_one, jobs))
    else:
        results = [_evaluate_one(job) for job in jobs]

    full_rows, fov_rows = [], []
    for (image_id, image_path, gt, fov), (_, mask, full, in_fov, seconds) in zip(pairs, results):
        mask_path = out_dir / "masks" / f"{image_id}_mask.{fmt}"
        save_mask(mask, mask_path)
        manifest.record("segment", [image_path], [mask_path], seconds, method=cfg.method, image=image_id)
        full_rows.append(ImageRow(image_id, rates(full), full))
        if in_fov is not None:
            fov_rows.append(ImageRow(image_id, rates(in_fov), in_fov))

    reports = {"full": aggregate(full_rows, label=f"{cfg.method} (full frame)")}
    if fov_rows and len(fov_rows) == len(full_rows):
        reports["fov"] = aggregate(fov_rows, label=f"{cfg.method} (inside FOV)")
    report_files = []
    for name, report in reports.items():
        for suffix, text in (("csv", report.to_csv()), ("txt", report.to_table())):
            path = out_dir / f"report_{name}.{suffix}"
            path.write_text(text)
            report_files.append(path)
    manifest.record("eval", [cfg.dataset.image_dir, cfg.dataset.gt_dir], report_files, 0.0)
    manifest.write()
    return reports.get("fov", reports["full"]), manifest
