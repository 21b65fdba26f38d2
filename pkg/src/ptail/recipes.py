"""Ingestion recipes for public loss datasets.

The data are not redistributed. Each recipe says where to get the file, how
to turn it into a sample (an :class:`IngestSpec` without the path) and which
``(u, t_hat, alpha)`` values a correct installation reproduces.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .ingest import IngestSpec


@dataclass(frozen=True)
class Checkpoint:
    u: float
    t_hat: float
    alpha: float
    m: int | None = None


@dataclass(frozen=True)
class Recipe:
    name: str
    filename: str
    source: str
    note: str
    ingest: IngestSpec
    n_expected: int | None
    checkpoints: tuple[Checkpoint, ...]

    def spec_for(self, directory: str) -> IngestSpec:
        return replace(self.ingest, path=os.path.join(directory, self.filename))


RECIPES: dict[str, Recipe] = {
    r.name: r
    for r in (
        Recipe(
            name="danish",
            filename="danish.csv",
            source="R package evir, dataset `danish` (write.csv(danish, row.names = FALSE))",
            note="2167 fire losses in million DKK; used as is",
            ingest=IngestSpec(path="", column=0),
            n_expected=2167,
            checkpoints=(
                Checkpoint(5.0, 0.30, 1.40),
                Checkpoint(10.0, 0.26, 1.70),
                Checkpoint(15.0, 0.25, 1.82),
            ),
        ),
        Recipe(
            name="wind",
            filename="wind.csv",
            source="Hogg and Klugman (1984), Loss Distributions, p. 64: 40 wind losses in million USD",
            note="reported to the nearest million, only losses >= 2; ties kept as is",
            ingest=IngestSpec(path="", column=0, min_threshold=2.0),
            n_expected=40,
            checkpoints=(
                Checkpoint(2.0, 0.45, 0.79, 40),
                Checkpoint(6.0, 0.33, 1.26, 15),
                Checkpoint(10.0, 0.16, 2.89, 10),
            ),
        ),
        Recipe(
            name="marine",
            filename="marine.csv",
            source="CASdatasets (http://cas.uqam.ca/), French marine losses 2003-2006, paid amounts",
            note="keep paid amounts >= 3",
            ingest=IngestSpec(path="", column=0, min_threshold=3.0),
            n_expected=657,
            checkpoints=(
                Checkpoint(20.0, 0.411, 0.91, 167),
                Checkpoint(50.0, 0.418, 0.89, 72),
                Checkpoint(100.0, 0.408, 0.92, 37),
                Checkpoint(300.0, 0.338, 1.21),
            ),
        ),
        Recipe(
            name="wildfire",
            filename="wildfire.csv",
            source="Alberta wildfire suppression costs 1983-1995 (10 915 records, CAD)",
            note="keep costs >= 1000, then divide by 1000",
            ingest=IngestSpec(path="", column=0, min_threshold=1000.0, rescale=1000.0),
            n_expected=6599,
            checkpoints=(
                Checkpoint(5.0, 0.44, 0.82, 2197),
                Checkpoint(25.0, 0.43, 0.85, 571),
                Checkpoint(60.0, 0.40, 0.94, 293),
                Checkpoint(150.0, 0.35, 1.17, 142),
                Checkpoint(400.0, 0.34, 1.18, 50),
            ),
        ),
        Recipe(
            name="nuclear",
            filename="nuclear.csv",
            source="https://data.world/rebeccaclay/nuclear-power-accidents (costs in million USD)",
            note="keep costs >= 10",
            ingest=IngestSpec(path="", column=0, min_threshold=10.0),
            n_expected=125,
            checkpoints=(
                Checkpoint(75.0, 0.58, 0.49, 64),
                Checkpoint(500.0, 0.46, 0.76, 31),
                Checkpoint(1640.0, 0.54, 0.57, 13),
            ),
        ),
    )
}
