"""Pipeline configuration: INI-style file with one section per processing stage.

Every constant of the method is written out explicitly so a configuration file
documents the run it produced::

    [frangi]
    sigma_min = 1
    sigma_max = 8
    sigma_step = 1
    beta = 0.5
    c = 15
    polarity = dark-on-bright

    [threshold]
    frangi_threshold = 100

    [connectivity]
    max_score = 350
    max_dist = 4
    connectivity = 8
    score_threshold = 1

    [morphology]
    dilations = 1
    erosions = 1

    [pipeline]
    method = lscf

    [dataset]
    preset = drive
    image_dir = DRIVE/test/images
    gt_dir = DRIVE/test/1st_manual
    fov_dir = DRIVE/test/mask
"""
from __future__ import annotations

import configparser
import dataclasses
import io
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .connectivity import LscfParams
from .vesselness import FrangiParams

__all__ = [
    "METHODS",
    "DatasetLayout",
    "PRESETS",
    "PipelineConfig",
    "ConfigError",
    "load_config",
    "parse_config",
    "dump_config",
]

METHODS = ("frangi-only", "cf", "cf+close", "lscf")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetLayout:
    """Where a dataset's images live and how each image finds its ground truth.

    ``image_pattern`` is a regular expression matched against image file names;
    its ``id`` group is substituted into ``gt_template`` / ``fov_template``.
    """

    image_dir: Optional[str] = None
    gt_dir: Optional[str] = None
    fov_dir: Optional[str] = None
    image_pattern: str = r"(?P<id>.+)\.(png|pgm|ppm)$"
    gt_template: str = "{id}.png"
    fov_template: Optional[str] = None

    def __post_init__(self):
        try:
            compiled = re.compile(self.image_pattern)
        except re.error as exc:
            raise ConfigError(f"bad image_pattern {self.image_pattern!r}: {exc}") from exc
        if "id" not in compiled.groupindex:
            raise ConfigError("image_pattern needs a named group 'id'")


# File names after conversion of the public releases to PNG/PPM, original stems kept.
PRESETS = {
    "drive": DatasetLayout(image_pattern=r"^(?P<id>\d+)_test\.png$",
                           gt_template="{id}_manual1.png", fov_template="{id}_test_mask.png"),
    "stare": DatasetLayout(image_pattern=r"^(?P<id>im\d+)\.(ppm|png)$", gt_template="{id}.ah.ppm"),
    "chase-db": DatasetLayout(image_pattern=r"^Image_(?P<id>\d+[LR])\.png$",
                              gt_template="Image_{id}_1stHO.png"),
    "iostar": DatasetLayout(image_pattern=r"^(?P<id>STAR \d+_O[DS]C?)\.png$",
                            gt_template="{id}_GT.png", fov_template="{id}_Mask.png"),
    "osirix": DatasetLayout(image_pattern=r"^(?P<id>[^.]+)\.png$", gt_template="{id}.png"),
}


@dataclass(frozen=True)
class PipelineConfig:
    frangi: FrangiParams = field(default_factory=FrangiParams)
    frangi_threshold: int = 100
    lscf: LscfParams = field(default_factory=LscfParams)
    method: str = "lscf"
    dilations: int = 1
    erosions: int = 1
    dataset: DatasetLayout = field(default_factory=DatasetLayout)
    workers: int = 1

    def __post_init__(self):
        if not 0 <= self.frangi_threshold <= 255:
            raise ConfigError(f"frangi_threshold must lie in [0, 255], got {self.frangi_threshold}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.dilations < 0 or self.erosions < 0:
            raise ConfigError("morphology operation counts must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def snapshot(self) -> dict:
        return dataclasses.asdict(self)

    def with_overrides(self, **kw) -> "PipelineConfig":
        """Return a copy with flat overrides (``max_score=…``, ``polarity=…``) applied; ``None`` is ignored."""
        kw = {k: v for k, v in kw.items() if v is not None}
        frangi_keys = {f.name for f in dataclasses.fields(FrangiParams)}
        lscf_keys = {f.name for f in dataclasses.fields(LscfParams)}
        try:
            frangi = replace(self.frangi, **{k: kw.pop(k) for k in list(kw) if k in frangi_keys})
            lscf = replace(self.lscf, **{k: kw.pop(k) for k in list(kw) if k in lscf_keys})
            return replace(self, frangi=frangi, lscf=lscf, **kw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


_FIELDS = {
    "frangi": {"sigma_min": float, "sigma_max": float, "sigma_step": float, "beta": float, "c": float,
               "polarity": str},
    "threshold": {"frangi_threshold": int},
    "connectivity": {"max_score": int, "max_dist": int, "connectivity": int, "score_threshold": int},
    "morphology": {"dilations": int, "erosions": int},
    "pipeline": {"method": str, "workers": int},
    "dataset": {"preset": str, "image_dir": str, "gt_dir": str, "fov_dir": str, "image_pattern": str,
                "gt_template": str, "fov_template": str},
}


def parse_config(text: str, base_dir=None) -> PipelineConfig:
    """Build a :class:`PipelineConfig` from INI text; relative dataset paths resolve against ``base_dir``."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse failure: {exc}") from exc

    values: dict[str, dict] = {}
    for section in parser.sections():
        if section not in _FIELDS:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser[section].items():
            kind = _FIELDS[section].get(key)
            if kind is None:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                values.setdefault(section, {})[key] = kind(raw.strip())
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc

    try:
        frangi = FrangiParams(**values.get("frangi", {}))
        lscf = LscfParams(**values.get("connectivity", {}))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    ds = dict(values.get("dataset", {}))
    preset = ds.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown dataset preset {preset!r}; known: {sorted(PRESETS)}")
        layout = replace(PRESETS[preset], **ds)
    else:
        layout = DatasetLayout(**ds)
    if base_dir is not None:
        base = Path(base_dir)
        resolved = {k: str(base / getattr(layout, k)) for k in ("image_dir", "gt_dir", "fov_dir")
                    if getattr(layout, k) is not None}
        layout = replace(layout, **resolved)

    return PipelineConfig(
        frangi=frangi,
        frangi_threshold=values.get("threshold", {}).get("frangi_threshold", 100),
        lscf=lscf,
        method=values.get("pipeline", {}).get("method", "lscf"),
        workers=values.get("pipeline", {}).get("workers", 1),
        dilations=values.get("morphology", {}).get("dilations", 1),
        erosions=values.get("morphology", {}).get("erosions", 1),
        dataset=layout,
    )


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror or exc})") from exc
    return parse_config(text, base_dir=path.parent)


def dump_config(cfg: PipelineConfig) -> str:
    """Serialize ``cfg`` in the same INI layout :func:`parse_config` reads."""
    f, l, d = cfg.frangi, cfg.lscf, cfg.dataset
    sections = {
        "frangi": {"sigma_min": f.sigma_min, "sigma_max": f.sigma_max, "sigma_step": f.sigma_step,
                   "beta": f.beta, "c": f.c, "polarity": f.polarity},
        "threshold": {"frangi_threshold": cfg.frangi_threshold},
        "connectivity": {"max_score": l.max_score, "max_dist": l.max_dist,
                         "connectivity": l.connectivity, "score_threshold": l.score_threshold},
        "morphology": {"dilations": cfg.dilations, "erosions": cfg.erosions},
        "pipeline": {"method": cfg.method, "workers": cfg.workers},
        "dataset": {k: v for k, v in dataclasses.asdict(d).items() if v is not None},
    }
    parser = configparser.ConfigParser(interpolation=None)
    for name, items in sections.items():
        parser[name] = {k: str(v) for k, v in items.items()}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
