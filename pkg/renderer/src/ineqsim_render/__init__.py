"""Offline figure rendering for ineqsim CSV and snapshot artifacts."""

__version__ = "0.1.0"

from .figures import (
    render_snapshots,
    render_sweep_curves,
    render_sweep_heatmap,
    render_timeseries,
    save_figure,
)
from .io import (
    RenderInputError,
    read_snapshot_dir,
    read_sweep,
    read_timeseries,
)

__all__ = [
    "RenderInputError",
    "read_snapshot_dir",
    "read_sweep",
    "read_timeseries",
    "render_snapshots",
    "render_sweep_curves",
    "render_sweep_heatmap",
    "render_timeseries",
    "save_figure",
]
