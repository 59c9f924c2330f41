"""
Synthetic Multigroup Mixture Types

Generative parameters of the two-class, multigroup benchmark and the sample/dataset
containers every risk computation works on.

Key Components:
- GaussianComponent: one weighted Gaussian of a class-conditional mixture
- MixtureSpec: validated generative parameters (classes, overlap, groups, skew)
- Sample: one labelled point with its subgroup id
- Dataset: an ordered, immutable collection of samples with array views
"""

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from exceptions.customexceptions import ValidationError

SUM_TOLERANCE = 1e-9

# Group proportions reported for the five subgroups of the 1000-sample benchmark
# (199/38/220/203/303), normalized so they sum to one.
DEFAULT_GROUP_SKEW = (0.2066, 0.0395, 0.2284, 0.2108, 0.3147)


class GaussianComponent(BaseModel):
    """
    One component of a class-conditional Gaussian mixture.

    Attributes:
        mean: Component mean (one entry per feature)
        covariance: Symmetric positive definite covariance matrix
        mix_weight: Share of the class drawn from this component
    """

    model_config = ConfigDict(frozen=True)

    mean: tuple[float, ...]
    covariance: tuple[tuple[float, ...], ...]
    mix_weight: float = Field(ge=0.0, le=1.0)

    @field_validator("covariance")
    @classmethod
    def _covariance_is_spd(cls, value: tuple[tuple[float, ...], ...], info: ValidationInfo):
        matrix = np.asarray(value, dtype=float)
        mean = info.data.get("mean")
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("covariance must be a square matrix")
        if mean is not None and matrix.shape[0] != len(mean):
            raise ValueError(f"covariance is {matrix.shape[0]}x{matrix.shape[1]} but mean has {len(mean)} entries")
        if not np.allclose(matrix, matrix.T, atol=1e-12):
            raise ValueError("covariance must be symmetric")
        try:
            np.linalg.cholesky(matrix)
        except np.linalg.LinAlgError:
            raise ValueError("covariance must be positive definite") from None
        return value

    def cholesky(self) -> np.ndarray:
        return np.linalg.cholesky(np.asarray(self.covariance, dtype=float))


# Default component covariance is COMPONENT_SCALE**2 times the identity. Groups are offset
# by at most 1.0, so the components must be tighter than unit variance for an offset to
# change how hard a group is.
COMPONENT_SCALE = 0.35

# Components of a class sit on either side of the class mean along (0.6, 0.8), the same
# axis the group offsets use (see datagen.generator.OFFSET_AXIS).
COMPONENT_SPREAD = (0.18, 0.24)


def _isotropic_covariance(scale: float = COMPONENT_SCALE, dimension: int = 2) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(scale**2 if i == j else 0.0 for j in range(dimension)) for i in range(dimension))


def _class_components(center: float) -> tuple[GaussianComponent, ...]:
    dx, dy = COMPONENT_SPREAD
    return (
        GaussianComponent(mean=(center - dx, -dy), covariance=_isotropic_covariance(), mix_weight=0.5),
        GaussianComponent(mean=(center + dx, dy), covariance=_isotropic_covariance(), mix_weight=0.5),
    )


class MixtureSpec(BaseModel):
    """
    Generative parameters of the synthetic two-class multigroup dataset.

    The defaults place the two class means at distance 2.0, each class a pair of tight
    Gaussians (standard deviation ``COMPONENT_SCALE``), and make class 0 the majority
    (``class_prior`` is the probability of class 1). Groups are drawn independently of the
    label from ``group_skew``; each group then shifts its features by a fixed offset of norm
    at most ``group_offset_scale``. The smallest group is pushed across the boundary the
    other groups share, so a classifier fitted to the bulk of the data fails it.

    ``group_offsets`` is normally left empty and drawn from the generation seed; pin it with
    `resolve_group_offsets` when two draws (training and audit) must share the same groups.
    """

    model_config = ConfigDict(frozen=True)

    class0_components: tuple[GaussianComponent, ...] = Field(default_factory=lambda: _class_components(-1.0))
    class1_components: tuple[GaussianComponent, ...] = Field(default_factory=lambda: _class_components(1.0))
    class_prior: float = Field(default=0.35, ge=0.0, le=1.0)
    overlap_factor: float = Field(default=1.0, gt=0.0)
    n_samples: int = Field(default=1000, gt=0)
    n_groups: int = Field(default=5, gt=0)
    group_skew: tuple[float, ...] = DEFAULT_GROUP_SKEW
    group_offset_scale: float = Field(default=1.0, ge=0.0, le=1.0)
    group_offsets: Optional[tuple[tuple[float, ...], ...]] = None

    @field_validator("class0_components", "class1_components")
    @classmethod
    def _weights_sum_to_one(cls, value: tuple[GaussianComponent, ...]):
        if not value:
            raise ValueError("at least one component is required")
        total = sum(component.mix_weight for component in value)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"mix_weight values sum to {total!r}, expected 1")
        dimensions = {len(component.mean) for component in value}
        if len(dimensions) != 1:
            raise ValueError("all components must share the feature dimension")
        return value

    @field_validator("group_skew")
    @classmethod
    def _skew_is_a_distribution(cls, value: tuple[float, ...]):
        if any(proportion < 0 for proportion in value):
            raise ValueError("group_skew entries must be nonnegative")
        if abs(sum(value) - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"group_skew sums to {sum(value)!r}, expected 1")
        return value

    @field_validator("group_offsets")
    @classmethod
    def _offsets_are_bounded(cls, value):
        if value is not None and any(float(np.linalg.norm(row)) > 1.0 + 1e-12 for row in value):
            raise ValueError("every group offset must have norm at most 1.0")
        return value

    @model_validator(mode="after")
    def _shapes_match_groups(self) -> "MixtureSpec":
        # covers the default skew as well
        if len(self.group_skew) != self.n_groups:
            raise ValueError(f"group_skew has {len(self.group_skew)} entries but n_groups is {self.n_groups}")
        if self.group_offsets is not None:
            if len(self.group_offsets) != self.n_groups:
                raise ValueError(f"group_offsets has {len(self.group_offsets)} rows but n_groups is {self.n_groups}")
            if any(len(row) != self.n_features for row in self.group_offsets):
                raise ValueError(f"every group offset must have {self.n_features} entries")
        return self

    @property
    def n_features(self) -> int:
        return len(self.class0_components[0].mean)

    def class_mean(self, label: int) -> np.ndarray:
        components = self.class0_components if label == 0 else self.class1_components
        return sum(component.mix_weight * np.asarray(component.mean, dtype=float) for component in components)

    def centroid(self) -> np.ndarray:
        """Global mean of the unshifted features: the class means weighted by the class prior."""
        return (1.0 - self.class_prior) * self.class_mean(0) + self.class_prior * self.class_mean(1)

    def scaled_means(self, label: int) -> list[np.ndarray]:
        """Component means of a class pulled toward the global centroid by ``overlap_factor``."""
        if len(self.class1_components[0].mean) != self.n_features:
            raise ValidationError("both classes must share the feature dimension", field="class1_components")
        centroid = self.centroid()
        components = self.class0_components if label == 0 else self.class1_components
        return [centroid + (np.asarray(c.mean, dtype=float) - centroid) / self.overlap_factor for c in components]

    def fingerprint(self, seed: int) -> str:
        """Stable hash of the spec and the seed it is drawn with."""
        canonical = json.dumps({"spec": self.model_dump(mode="json"), "seed": int(seed)}, sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Sample:
    """
    A single labelled point of the benchmark.

    Attributes:
        x: Feature values (dimensionless)
        y: Class label in {0, 1}
        group_id: Subgroup in ``[0, n_groups)``
        sample_id: Identifier, unique within a dataset
    """

    x: tuple[float, ...]
    y: int
    group_id: int
    sample_id: int


@dataclass(frozen=True)
class Dataset:
    """
    An ordered collection of samples partitioned into subgroups.

    Array views (`X`, `y`, `group_ids`, `sample_ids`) are computed once and cached; the
    dataset itself is immutable and safe to share between workers.
    """

    samples: tuple[Sample, ...]
    n_groups: int
    spec_fingerprint: str = ""

    def __post_init__(self):
        if not self.samples:
            raise ValidationError("a dataset needs at least one sample", field="samples")
        if self.n_groups <= 0:
            raise ValidationError("must be positive", field="n_groups")
        groups = {sample.group_id for sample in self.samples}
        if min(groups) < 0 or max(groups) >= self.n_groups:
            raise ValidationError(f"group ids must lie in [0, {self.n_groups})", field="group_id")
        missing = sorted(set(range(self.n_groups)) - groups)
        if missing:
            raise ValidationError(f"groups {missing} have no samples", field="n_samples")
        if len({sample.sample_id for sample in self.samples}) != len(self.samples):
            raise ValidationError("sample ids must be unique", field="sample_id")

    def __len__(self) -> int:
        return len(self.samples)

    @classmethod
    def from_arrays(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        group_ids: np.ndarray,
        n_groups: Optional[int] = None,
        spec_fingerprint: str = "",
    ) -> "Dataset":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        group_ids = np.asarray(group_ids, dtype=int)
        samples = tuple(
            Sample(x=tuple(float(v) for v in X[i]), y=int(y[i]), group_id=int(group_ids[i]), sample_id=i)
            for i in range(X.shape[0])
        )
        if n_groups is None:
            n_groups = int(group_ids.max()) + 1
        return cls(samples=samples, n_groups=n_groups, spec_fingerprint=spec_fingerprint)

    @cached_property
    def X(self) -> np.ndarray:
        matrix = np.array([sample.x for sample in self.samples], dtype=float)
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def y(self) -> np.ndarray:
        labels = np.array([sample.y for sample in self.samples], dtype=int)
        labels.setflags(write=False)
        return labels

    @cached_property
    def group_ids(self) -> np.ndarray:
        groups = np.array([sample.group_id for sample in self.samples], dtype=int)
        groups.setflags(write=False)
        return groups

    @cached_property
    def sample_ids(self) -> np.ndarray:
        ids = np.array([sample.sample_id for sample in self.samples], dtype=int)
        ids.setflags(write=False)
        return ids

    def group_sizes(self) -> list[int]:
        return np.bincount(self.group_ids, minlength=self.n_groups).tolist()
