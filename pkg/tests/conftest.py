"""Shared fixtures: the worked housing example and random instance helpers."""

from __future__ import annotations

import numpy as np
import pytest

from bod.engine import RoundChoice
from bod.table import augment, parse_dataset

LOCATION_CSV = "Near Urban,Criminal Free\n26,5\n35,2\n45,3\n9,2\n6,4\n47,7\n"
POLICIES_CSV = "Tax\n90\n20\n78\n46\n65\n30\n"
HOME_VALUES_CSV = "Size,Age\n1500,150\n1300,120\n2000,95\n1700,50\n1800,25\n1450,75\n"

ROUND1_CHOICE = {"location": "Near Urban", "policies": "Tax", "home_values": "Size"}
ROUND2_CHOICE = {"location": "Criminal Free", "home_values": "Age"}

# House r is tuple id r-1 throughout.
HOUSE_3, HOUSE_6 = 2, 5


@pytest.fixture
def paper_datasets():
    return [
        parse_dataset(LOCATION_CSV, "location"),
        parse_dataset(POLICIES_CSV, "policies"),
        parse_dataset(HOME_VALUES_CSV, "home_values"),
    ]


@pytest.fixture
def paper_table(paper_datasets):
    return augment(paper_datasets)


def random_instance(rng: np.random.Generator):
    """A random small table plus a random complete ranking sequence.

    2-4 datasets, at most 8 columns total, at most 50 tuples, integer cells
    drawn from a small range so value ties are common.
    """
    n_datasets = int(rng.integers(2, 5))
    widths = []
    remaining = 8 - n_datasets
    for _ in range(n_datasets):
        extra = int(rng.integers(0, remaining + 1))
        widths.append(1 + extra)
        remaining -= extra
    n_tuples = int(rng.integers(1, 51))
    high = int(rng.choice([3, 10, 1000]))
    datasets = []
    for i, width in enumerate(widths):
        rows = rng.integers(1, high + 1, size=(n_tuples, width)).astype(float)
        datasets.append(
            parse_dataset(
                ",".join(f"a{j}" for j in range(width))
                + "\n"
                + "\n".join(",".join(str(int(v)) for v in row) for row in rows)
                + "\n",
                f"ds{i}",
            )
        )
    table = augment(datasets)
    choices = random_complete_ranking(rng, datasets)
    return table, choices


def random_complete_ranking(rng: np.random.Generator, datasets) -> list[RoundChoice]:
    orders = {
        ds.name: list(rng.permutation(list(ds.attributes))) for ds in datasets
    }
    rounds = max(len(ds.attributes) for ds in datasets)
    return [
        RoundChoice(
            {
                name: order[i]
                for name, order in orders.items()
                if i < len(order)
            }
        )
        for i in range(rounds)
    ]
