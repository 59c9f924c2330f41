import logging

from datagen.datasetio import save_dataset
from datagen.generator import audit_shift, generate, resolve_group_offsets
from datagen.mixture import Dataset

from .runconfig import DataConfig
from .stage import Stage

logger = logging.getLogger(__name__)


def draw_datasets(data: DataConfig) -> tuple[Dataset, Dataset]:
    """
    Draws the training set and the audit set.

    Both draws share the group offsets drawn from the training seed, so their subgroups are
    the same populations; the audit draw uses the higher-overlap spec and its own seed.
    """
    spec = resolve_group_offsets(data.spec, data.seed)
    train = generate(spec, data.seed)
    audit = generate(audit_shift(spec, data.audit_shift), data.resolved_audit_seed())
    return train, audit


class DatagenStage(Stage):
    name = "datagen"

    async def run(self) -> tuple[Dataset, Dataset]:
        train, audit = draw_datasets(self.config.data)
        save_dataset(train, self.store.train_dataset)
        save_dataset(audit, self.store.audit_dataset)
        logger.info("Group sizes (train): %s; (audit): %s", train.group_sizes(), audit.group_sizes())
        return train, audit
