from .artifactstore import ArtifactStore
from .auditstage import AuditOutcome, AuditStage
from .boundary import BoundaryStage, boundary_curvature, boundary_segments
from .datagenstage import DatagenStage, draw_datasets
from .runconfig import RunConfig, load_run_config
from .simulatestage import SimulateStage
from .stage import Stage
from .sweepstage import SWEEP_COLUMNS, SweepStage
from .trainstage import TrainStage

__all__ = [
    "ArtifactStore",
    "AuditOutcome",
    "AuditStage",
    "BoundaryStage",
    "DatagenStage",
    "RunConfig",
    "SWEEP_COLUMNS",
    "SimulateStage",
    "Stage",
    "SweepStage",
    "TrainStage",
    "boundary_curvature",
    "boundary_segments",
    "draw_datasets",
    "load_run_config",
]
