"""
Decision-Boundary Geometry

The boundary of a mixed strategy is the 0.5-level set of its class-1 probability, traced
with contourpy on a regular grid. Its curvature is measured as the largest orthogonal
distance of the traced points from their total-least-squares line.
"""

import logging
from typing import Sequence

import contourpy
import numpy as np

from datagen.datasetio import load_dataset
from datagen.mixture import Dataset
from learners.hypothesis import MixedStrategy
from learners.modelio import load_model
from learners.trainconfig import ModelKind
from raap.figures import boundary_figure, save_svg
from utils.formatutils import write_document

from .artifactstore import ArtifactStore
from .runconfig import RunConfig
from .stage import Stage

logger = logging.getLogger(__name__)

Limits = tuple[float, float, float, float]


def data_limits(data: Dataset, padding: float) -> Limits:
    low = data.X.min(axis=0) - padding
    high = data.X.max(axis=0) + padding
    return float(low[0]), float(high[0]), float(low[1]), float(high[1])


def probability_grid(Q: MixedStrategy, limits: Limits, resolution: int = 200) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Class-1 probability on a ``resolution x resolution`` grid; ``P[i, j]`` sits at ``(xs[j], ys[i])``."""
    xs = np.linspace(limits[0], limits[1], resolution)
    ys = np.linspace(limits[2], limits[3], resolution)
    gx, gy = np.meshgrid(xs, ys)
    P = Q.predict_proba(np.column_stack([gx.ravel(), gy.ravel()])).reshape(gx.shape)
    return xs, ys, P


def boundary_segments(Q: MixedStrategy, limits: Limits, resolution: int = 200) -> list[np.ndarray]:
    """Polylines (``(k, 2)`` arrays) of the 0.5-level set inside ``limits``."""
    xs, ys, P = probability_grid(Q, limits, resolution)
    generator = contourpy.contour_generator(xs, ys, P, line_type=contourpy.LineType.Separate)
    return [np.asarray(line, dtype=float) for line in generator.lines(0.5) if len(line) >= 2]


def boundary_curvature(segments: Sequence[np.ndarray]) -> float:
    """Maximum orthogonal deviation of all boundary points from their best-fit line (0 without a boundary)."""
    if not segments:
        return 0.0
    points = np.vstack(segments)
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    normal = vt[-1]
    return float(np.abs(centered @ normal).max())


class BoundaryStage(Stage):
    """Draws each requested model's decision boundary over the training set and records its curvature."""

    name = "boundary"

    def __init__(self, config: RunConfig, store: ArtifactStore, kinds: Sequence[ModelKind] = ()):
        super().__init__(config, store)
        self.kinds = list(kinds) or list(config.train.models)

    async def run(self) -> dict[str, float]:
        data = load_dataset(self.store.require(self.store.train_dataset, "datagen"))
        limits = data_limits(data, self.config.boundary.padding)
        curvature = {}
        for kind in self.kinds:
            model = load_model(self.store.require(self.store.model(kind), f"train --model {kind.value}")).model
            segments = boundary_segments(model, limits, self.config.boundary.resolution)
            curvature[kind.value] = boundary_curvature(segments)
            figure = boundary_figure(data, segments, title=kind.value, limits=limits)
            save_svg(figure, self.store.boundary_figure(kind))
            logger.info("%s boundary: %d polylines, curvature %.4f", kind.value, len(segments), curvature[kind.value])
        write_document(self.store.boundary_summary, {"limits": list(limits), "curvature": curvature})
        return curvature
