"""Shared fixtures: a small deterministic planted scenario on disk."""

from __future__ import annotations

import pytest

from earshot.corpus import Post
from earshot.synthbench import PlantSpec, generate, write_synthbench


@pytest.fixture(scope="session")
def small_spec() -> PlantSpec:
    return PlantSpec(n_posts=2000, plant_rate=1.0, rng_seed=7)


@pytest.fixture(scope="session")
def small_synth(small_spec):
    return generate(small_spec)


@pytest.fixture(scope="session")
def scenario_dir(tmp_path_factory, small_spec):
    out = tmp_path_factory.mktemp("scenario")
    write_synthbench(out, small_spec)
    return out


@pytest.fixture()
def tiny_posts() -> list[Post]:
    return [
        Post("p1", "the globalists are pushing the great replacement"),
        Post("p2", "nothing to see here, just cooking dinner"),
        Post("p3", "they talk about cosmopolitan elites again"),
        Post("p4", "my dog chased a squirrel in the park"),
    ]
