"""
Seed Sweep Stage

Evaluates every (seed, model) cell: draw the seed's training and audit sets, train the
model with that seed, run it as a single agent over the audit set and summarize. Cells run
in worker threads (at most ``sweep.workers`` at once) and share nothing; the table is
assembled seed-major in the configured model order whatever order the cells finish in.
"""

import asyncio
import logging

import pandas as pd

from datagen.mixture import Dataset
from learners import train_model
from learners.trainconfig import ModelKind
from raap.figures import save_svg, sweep_summary_figure
from raap.metrics import compute_metrics
from simnet.episode import run_episode, sla_status
from simnet.fleet import build_fleet

from .datagenstage import draw_datasets
from .stage import Stage

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["model", "seed", "avg_acc", "wg_acc", "gap", "low_conf_rate", "crit_rate", "sla_status"]


class SweepStage(Stage):
    name = "sweep"

    def evaluate_cell(self, kind: ModelKind, seed: int, train: Dataset, audit: Dataset) -> dict:
        result = train_model(kind, train, self.config.train.config_for(kind, seed=seed))
        fleet = build_fleet([(kind, result.model)], {"sweep": [0]})
        traces = run_episode(fleet, audit, self.config.slo)
        metrics = next(iter(compute_metrics(traces, audit.n_groups).agents.values()))
        return {
            "model": kind.value,
            "seed": seed,
            "avg_acc": metrics.avg_acc,
            "wg_acc": metrics.wg_acc,
            "gap": metrics.gap,
            "low_conf_rate": metrics.low_conf_rate,
            "crit_rate": metrics.critical_error_rate,
            "sla_status": sla_status(traces, self.config.slo, audit.n_groups).value,
        }

    async def run(self) -> pd.DataFrame:
        seeds = self.config.sweep.seeds
        models = self.config.train.models
        limit = asyncio.Semaphore(self.config.sweep.workers)

        async def bounded(fn, *args):
            async with limit:
                return await asyncio.to_thread(fn, *args)

        data_by_seed = dict(
            zip(
                seeds,
                await asyncio.gather(
                    *(bounded(draw_datasets, self.config.data.model_copy(update={"seed": s, "audit_seed": None})) for s in seeds)
                ),
            )
        )
        rows = await asyncio.gather(
            *(bounded(self.evaluate_cell, kind, seed, *data_by_seed[seed]) for seed in seeds for kind in models)
        )
        table = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
        self.store.sweep_table.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(self.store.sweep_table, index=False, lineterminator="\n", float_format="%.6f")
        save_svg(sweep_summary_figure(table), self.store.sweep_figure)
        summary = table.groupby("model", sort=False)[["avg_acc", "wg_acc", "gap"]].mean()
        logger.info("Sweep over %d seeds:\n%s", len(seeds), summary.to_string(float_format="%.3f"))
        return table
