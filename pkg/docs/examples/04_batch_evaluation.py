"""Evaluate a dataset laid out on disk.

Point the script at a directory with ``images/``, ``truth/`` and optionally
``fov/`` holding a public dataset converted to PNG/PPM, and name its preset:

    python3 docs/examples/04_batch_evaluation.py /data/DRIVE drive out/

The same run from the shell is
``vesselkit batch --preset drive --images ... --truth ... --fov ... --out out/``.
"""
import sys
from dataclasses import replace
from pathlib import Path

from vesselkit import PRESETS, PipelineConfig, run_dataset

root, preset, out = Path(sys.argv[1]), sys.argv[2], Path(sys.argv[3])
fov = root / "fov"
layout = replace(PRESETS[preset], image_dir=str(root / "images"), gt_dir=str(root / "truth"),
                 fov_dir=str(fov) if fov.is_dir() else None)

for method in ("frangi-only", "cf", "cf+close", "lscf"):
    report, _ = run_dataset(PipelineConfig(method=method, dataset=layout, workers=4), out / method)
    m = report.means
    print(f"{method:12} TP {m.tp_rate:6.2f}  TN {m.tn_rate:6.2f}  ACC {m.accuracy:6.2f}")
print(f"per-image tables and CSVs under {out}/<method>/")
