import numpy as np
from scipy.special import logsumexp
from scipy.stats import multivariate_normal

from exceptions.customexceptions import ContractError

from .mixture import Dataset, MixtureSpec


def class_log_density(spec: MixtureSpec, X: np.ndarray, group_ids: np.ndarray, label: int) -> np.ndarray:
    """Log density of ``X`` under the class-``label`` mixture of each point's own group."""
    if spec.group_offsets is None:
        raise ContractError("the Bayes oracle needs pinned group offsets (see resolve_group_offsets)")
    X = np.asarray(X, dtype=float)
    shifted = X - np.asarray(spec.group_offsets, dtype=float)[np.asarray(group_ids, dtype=int)]
    components = spec.class0_components if label == 0 else spec.class1_components
    terms = [
        np.log(component.mix_weight) + multivariate_normal(mean=mean, cov=np.asarray(component.covariance)).logpdf(shifted)
        for component, mean in zip(components, spec.scaled_means(label))
        if component.mix_weight > 0
    ]
    return logsumexp(np.vstack(terms), axis=0)


def bayes_predict(spec: MixtureSpec, X: np.ndarray, group_ids: np.ndarray) -> np.ndarray:
    """Bayes-optimal labels (ties go to class 1) given the exact generative densities."""
    prior = spec.class_prior
    with np.errstate(divide="ignore"):
        score1 = np.log(prior) + class_log_density(spec, X, group_ids, 1)
        score0 = np.log(1.0 - prior) + class_log_density(spec, X, group_ids, 0)
    return (score1 >= score0).astype(int)


def bayes_accuracy(spec: MixtureSpec, dataset: Dataset) -> float:
    return float(np.mean(bayes_predict(spec, dataset.X, dataset.group_ids) == dataset.y))
