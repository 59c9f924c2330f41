import logging

import numpy as np

from exceptions.customexceptions import ValidationError

from .mixture import Dataset, MixtureSpec, Sample

logger = logging.getLogger(__name__)

# Offsets run along OFFSET_AXIS, expressed in (class axis, first orthogonal axis)
# coordinates. The smallest group moves by +group_offset_scale toward class 1; every other
# group moves the opposite way by a seed-drawn share in [MAJORITY_OFFSET_SHARE, 1] of it.
# Moving along the axis keeps each class on one line, so the groups stay jointly separable
# by a boundary tilted along it.
OFFSET_AXIS = (0.6, 0.8)
MAJORITY_OFFSET_SHARE = 0.8


def _streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent generators for the group offsets and for the samples themselves."""
    offset_seq, sample_seq = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF).spawn(2)
    return np.random.default_rng(offset_seq), np.random.default_rng(sample_seq)


def offset_direction(spec: MixtureSpec) -> np.ndarray:
    """Unit vector the group offsets run along (see ``OFFSET_AXIS``)."""
    d = spec.n_features
    axis = spec.class_mean(1) - spec.class_mean(0)
    norm = np.linalg.norm(axis)
    axis = axis / norm if norm > 0 else np.eye(d)[0]
    if d == 1:
        return axis
    basis = np.eye(d)
    # standard basis vector closest to orthogonal to the class axis
    candidate = basis[int(np.argmin(np.abs(basis @ axis)))]
    orthogonal = candidate - (candidate @ axis) * axis
    orthogonal /= np.linalg.norm(orthogonal)
    along, across = OFFSET_AXIS
    return along * axis + across * orthogonal


def minority_group(spec: MixtureSpec) -> int:
    """Index of the smallest group (lowest index on ties)."""
    return int(np.argmin(np.asarray(spec.group_skew, dtype=float)))


def draw_group_offsets(spec: MixtureSpec, seed: int) -> np.ndarray:
    """Per-group mean offsets (one row per group, norm <= ``group_offset_scale``) drawn from the seed."""
    if spec.group_offsets is not None:
        return np.asarray(spec.group_offsets, dtype=float)
    rng, _ = _streams(seed)
    shares = -rng.uniform(MAJORITY_OFFSET_SHARE, 1.0, size=spec.n_groups)
    shares[minority_group(spec)] = 1.0
    return spec.group_offset_scale * shares[:, None] * offset_direction(spec)[None, :]


def resolve_group_offsets(spec: MixtureSpec, seed: int) -> MixtureSpec:
    """
    Returns a copy of ``spec`` with its group offsets pinned to the ones drawn from ``seed``.

    A pinned spec generates the same subgroups whatever seed it is later drawn with, which
    is what lets a training draw and a shifted audit draw be compared group by group.
    """
    if spec.group_offsets is not None:
        return spec
    offsets = draw_group_offsets(spec, seed)
    return spec.model_copy(update={"group_offsets": tuple(tuple(float(v) for v in row) for row in offsets)})


def generate(spec: MixtureSpec, seed: int) -> Dataset:
    """
    Draws a dataset from the mixture described by ``spec``.

    Labels follow ``class_prior``; features come from the class's Gaussian mixture with
    component means pulled toward the global centroid by ``overlap_factor``;
    groups are drawn from ``group_skew`` independently of the label and shift their
    features by the group offset. The result depends only on ``(spec, seed)``.

    Raises:
        ValidationError: If a group ends up without samples (``n_samples`` too small for the skew).
    """
    offsets = draw_group_offsets(spec, seed)
    _, rng = _streams(seed)
    n, d = spec.n_samples, spec.n_features

    labels = (rng.random(n) < spec.class_prior).astype(int)
    skew = np.asarray(spec.group_skew, dtype=float)
    groups = rng.choice(spec.n_groups, size=n, p=skew / skew.sum())

    X = np.empty((n, d), dtype=float)
    for label, components in ((0, spec.class0_components), (1, spec.class1_components)):
        index = np.flatnonzero(labels == label)
        weights = np.array([component.mix_weight for component in components], dtype=float)
        chosen = rng.choice(len(components), size=index.size, p=weights / weights.sum())
        noise = rng.standard_normal((index.size, d))
        for k, (component, mean) in enumerate(zip(components, spec.scaled_means(label))):
            selected = chosen == k
            X[index[selected]] = mean + noise[selected] @ component.cholesky().T
    X += offsets[groups]

    counts = np.bincount(groups, minlength=spec.n_groups)
    if (counts == 0).any():
        raise ValidationError(
            f"groups {np.flatnonzero(counts == 0).tolist()} received no samples; increase n_samples",
            field="n_samples",
        )

    samples = tuple(
        Sample(x=tuple(float(v) for v in X[i]), y=int(labels[i]), group_id=int(groups[i]), sample_id=i)
        for i in range(n)
    )
    logger.debug("Generated %d samples in %d groups (class-1 share %.3f)", n, spec.n_groups, labels.mean())
    return Dataset(samples=samples, n_groups=spec.n_groups, spec_fingerprint=spec.fingerprint(seed))


def audit_shift(spec: MixtureSpec, shift: float) -> MixtureSpec:
    """
    Returns the audit variant of ``spec``: class overlap multiplied by ``shift``, everything else unchanged.

    Raises:
        ValidationError: If ``shift`` is not strictly greater than 1.
    """
    if not shift > 1.0:
        raise ValidationError(f"audit shift must be > 1, got {shift!r}", field="shift")
    return spec.model_copy(update={"overlap_factor": spec.overlap_factor * shift})
