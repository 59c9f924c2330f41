"""
Run Configuration

One YAML document drives every stage. Its sections are validated by pydantic models; any
section (or the whole file) may be omitted to take the defaults.
"""

import logging
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from datagen.mixture import MixtureSpec
from exceptions.customexceptions import ParseError
from learners.trainconfig import ModelKind, TrainConfig
from raap.attribution import SeverityWeights
from simnet.slo import SLOSpec

logger = logging.getLogger(__name__)

DEFAULT_MODELS = (
    ModelKind.ERM,
    ModelKind.AdaBoost,
    ModelKind.RaiGreedy,
    ModelKind.RaiFrankWolfe,
    ModelKind.OnlineGDRO,
    ModelKind.Hybrid,
)


def _default_vendors() -> dict[str, list[ModelKind]]:
    return {"vendor-a": list(DEFAULT_MODELS[:3]), "vendor-b": list(DEFAULT_MODELS[3:])}


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class DataConfig(_Section):
    spec: MixtureSpec = Field(default_factory=MixtureSpec)
    seed: int = Field(default=7, ge=0)
    audit_shift: float = Field(default=1.5, gt=1.0)
    audit_seed: Optional[int] = Field(default=None, ge=0)

    def resolved_audit_seed(self) -> int:
        """The audit draw's seed; derived from ``seed`` when not given."""
        if self.audit_seed is not None:
            return self.audit_seed
        return int(np.random.SeedSequence([self.seed, 1]).generate_state(1, dtype=np.uint32)[0])


class TrainSection(_Section):
    defaults: TrainConfig = Field(default_factory=TrainConfig)
    models: list[ModelKind] = Field(default_factory=lambda: list(DEFAULT_MODELS))
    overrides: dict[ModelKind, dict[str, Any]] = Field(default_factory=dict)

    @field_validator("models")
    @classmethod
    def _unique_models(cls, value: list[ModelKind]):
        if not value:
            raise ValueError("at least one model is needed")
        if len(set(value)) != len(value):
            raise ValueError("models must not repeat")
        return value

    @model_validator(mode="after")
    def _overrides_are_valid(self):
        for kind in self.overrides:
            self.config_for(kind)
        return self

    def config_for(self, kind: ModelKind, seed: Optional[int] = None) -> TrainConfig:
        values = self.defaults.model_dump()
        values.update(self.overrides.get(kind, {}))
        if seed is not None:
            values["seed"] = seed
        return TrainConfig.model_validate(values)


class FleetConfig(_Section):
    vendors: dict[str, list[ModelKind]] = Field(default_factory=_default_vendors)


class RaapConfig(_Section):
    severity: SeverityWeights = Field(default_factory=SeverityWeights)
    corrupt: float = Field(default=0.0, ge=0.0, le=1.0)
    corruption_seed: int = Field(default=0, ge=0)
    max_problem_points: int = Field(default=20, ge=0)


class SweepConfig(_Section):
    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])
    workers: int = Field(default=4, gt=0)

    @field_validator("seeds")
    @classmethod
    def _nonempty(cls, value: list[int]):
        if not value:
            raise ValueError("the sweep needs at least one seed")
        return value


class BoundaryConfig(_Section):
    resolution: int = Field(default=200, ge=10)
    padding: float = Field(default=0.5, ge=0.0)


class RunConfig(_Section):
    data: DataConfig = Field(default_factory=DataConfig)
    train: TrainSection = Field(default_factory=TrainSection)
    slo: SLOSpec = Field(default_factory=SLOSpec)
    fleet: FleetConfig = Field(default_factory=FleetConfig)
    raap: RaapConfig = Field(default_factory=RaapConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    boundary: BoundaryConfig = Field(default_factory=BoundaryConfig)
    output_dir: str = "out"

    @model_validator(mode="after")
    def _fleet_covers_models(self):
        owned = [kind for kinds in self.fleet.vendors.values() for kind in kinds]
        unknown = sorted(set(owned) - set(self.train.models), key=str)
        if unknown:
            raise ValueError(f"fleet lists models that are not trained: {[k.value for k in unknown]}")
        return self

    def vendor_assignment(self) -> dict[str, list[int]]:
        """Vendor to indices into ``train.models`` (only models owned by some vendor are fielded)."""
        return {
            vendor: [self.train.models.index(kind) for kind in kinds] for vendor, kinds in self.fleet.vendors.items()
        }

    def with_overrides(
        self,
        seed: Optional[int] = None,
        output_dir: Optional[str] = None,
        floor: Optional[float] = None,
        corrupt: Optional[float] = None,
    ) -> "RunConfig":
        """Returns a re-validated copy with the command-line overrides applied."""
        values = self.model_dump()
        if seed is not None:
            values["data"]["seed"] = seed
            values["train"]["defaults"]["seed"] = seed
        if output_dir is not None:
            values["output_dir"] = output_dir
        if floor is not None:
            values["slo"]["wg_policy_floor"] = floor
        if corrupt is not None:
            values["raap"]["corrupt"] = corrupt
        return RunConfig.model_validate(values)


def load_run_config(path: Optional[Union[str, Path]]) -> RunConfig:
    """
    Reads and validates a YAML run configuration.

    A missing file at the default location yields the defaults; ``None`` does as well.

    Raises:
        ParseError: If the file is not valid YAML or not a mapping.
        pydantic.ValidationError: If a value is invalid (the error names the field).
    """
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        document = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as error:
        mark = getattr(error, "problem_mark", None)
        raise ParseError(f"invalid YAML ({error})", mark.line + 1 if mark else 1, str(path)) from error
    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ParseError("the run configuration must be a mapping", 1, str(path))
    logger.info("Loaded run configuration from %s", path)
    return RunConfig.model_validate(document)
