from .datasetio import load_dataset, save_dataset
from .generator import audit_shift, generate, resolve_group_offsets
from .mixture import Dataset, GaussianComponent, MixtureSpec, Sample

__all__ = [
    "Dataset",
    "GaussianComponent",
    "MixtureSpec",
    "Sample",
    "audit_shift",
    "generate",
    "load_dataset",
    "resolve_group_offsets",
    "save_dataset",
]
