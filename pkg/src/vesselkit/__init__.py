"""Unsupervised vessel segmentation: Frangi vesselness followed by connectivity filtering."""

__version__ = "0.1.0"

from .raster import (  # noqa: E402
    ImageIOError,
    RasterTypeError,
    green_channel,
    load_image,
    save_gray,
    save_mask,
    threshold,
    to_gray,
)
from .vesselness import FrangiParams, frangi_multiscale, frangi_response  # noqa: E402
from .connectivity import (  # noqa: E402
    DistanceParams,
    LscfParams,
    connectivity_filter,
    ls_connectivity_filter,
    render_scores,
    minkowski_chebyshev_distance,
    score_threshold,
)
from .morphology import CROSS, close, dilate, erode  # noqa: E402
from .metrics import ConfusionCounts, EvalReport, aggregate, confusion, rates  # noqa: E402
from .config import PipelineConfig, load_config  # noqa: E402
from .pipeline import segment, run_dataset, run_stage  # noqa: E402
