from pathlib import Path
from typing import Union

from config import (
    ATTRIBUTION_FILE,
    AUDIT_DATASET_FILE,
    DATA_DIR,
    FIGURES_DIR,
    GROUP_FIGURE_FILE,
    MODEL_FILE_SUFFIX,
    MODELS_DIR,
    OPERATOR_REPORT_FILE,
    REPORT_PAGE_FILE,
    REPORTS_DIR,
    SWEEP_DIR,
    SWEEP_FIGURE_FILE,
    SWEEP_TABLE_FILE,
    TRACE_LOG_FILE,
    TRACES_DIR,
    TRAIN_DATASET_FILE,
    TRAINING_LOG_SUFFIX,
    TRUTH_SIDECAR_FILE,
    USER_REPORT_FILE,
)
from learners.trainconfig import ModelKind


class ArtifactStore:
    """Fixed layout of every artifact below the run's output directory."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    @property
    def train_dataset(self) -> Path:
        return self.root / DATA_DIR / TRAIN_DATASET_FILE

    @property
    def audit_dataset(self) -> Path:
        return self.root / DATA_DIR / AUDIT_DATASET_FILE

    def model(self, kind: ModelKind) -> Path:
        return self.root / MODELS_DIR / f"{kind.value}{MODEL_FILE_SUFFIX}"

    def training_log(self, kind: ModelKind) -> Path:
        return self.root / MODELS_DIR / f"{kind.value}{TRAINING_LOG_SUFFIX}"

    @property
    def traces(self) -> Path:
        return self.root / TRACES_DIR / TRACE_LOG_FILE

    @property
    def truth(self) -> Path:
        return self.root / TRACES_DIR / TRUTH_SIDECAR_FILE

    @property
    def user_report(self) -> Path:
        return self.root / REPORTS_DIR / USER_REPORT_FILE

    @property
    def operator_report(self) -> Path:
        return self.root / REPORTS_DIR / OPERATOR_REPORT_FILE

    @property
    def attribution(self) -> Path:
        return self.root / REPORTS_DIR / ATTRIBUTION_FILE

    @property
    def report_page(self) -> Path:
        return self.root / REPORTS_DIR / REPORT_PAGE_FILE

    @property
    def group_figure(self) -> Path:
        return self.root / FIGURES_DIR / GROUP_FIGURE_FILE

    def boundary_figure(self, kind: ModelKind) -> Path:
        return self.root / FIGURES_DIR / f"boundary_{kind.value}.svg"

    @property
    def boundary_summary(self) -> Path:
        return self.root / FIGURES_DIR / "boundaries.json"

    @property
    def sweep_table(self) -> Path:
        return self.root / SWEEP_DIR / SWEEP_TABLE_FILE

    @property
    def sweep_figure(self) -> Path:
        return self.root / SWEEP_DIR / SWEEP_FIGURE_FILE

    def require(self, path: Path, producer: str) -> Path:
        """Returns ``path`` or raises FileNotFoundError naming the command that produces it."""
        if not path.is_file():
            raise FileNotFoundError(f"{path} not found; run `raapctl {producer}` first")
        return path
