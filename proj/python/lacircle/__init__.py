"""Multiple-circle detection with a learning automaton."""

from ._lacircle import (
    Circle,
    CollinearPoints,
    ConfigError,
    DetectedCircle,
    DetectionError,
    DetectionResult,
    DetectorConfig,
    EdgeConfig,
    Error,
    FormatError,
    IoError,
    NoFeasibleActions,
    PlacementFailure,
    TooFewEdgePoints,
    add_salt_pepper,
    circle_from_triplet,
    detect,
    detect_edges,
    distinctiveness,
    distinctiveness_threshold,
    error_score,
    generate_scene,
    load_gray_image,
    lri_update,
    match_circles,
    rasterize_circle,
    run_benchmark,
    select_action,
    success_rate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
