"""
Pipeline Stage Base Module

Every subcommand is a `Stage`: it is constructed from the validated run configuration and
the artifact store, then awaited with `run`. Stages read their inputs from the store and
write their outputs back to it, so each one can be rerun on its own.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any

from .artifactstore import ArtifactStore
from .runconfig import RunConfig

logger = logging.getLogger(__name__)


class Stage(ABC):
    name: str

    def __init__(self, config: RunConfig, store: ArtifactStore):
        self.config = config
        self.store = store

    async def setup(self) -> None:
        """Creates the output directory; stages with more preparation extend this."""
        self.store.root.mkdir(parents=True, exist_ok=True)

    @abstractmethod
    async def run(self) -> Any:
        raise NotImplementedError
