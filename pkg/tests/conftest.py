import os
from pathlib import Path
from typing import Dict, List

import numpy as np
import pytest

from hpdesign.lattice import Instance, select_instance
from hpdesign.vqa.campaign import Campaign, CampaignTemplate, run_campaign
from hpdesign.vqa.optimizer import OptimizerConfig


def pytest_collection_modifyitems(config, items):
    if os.getenv('HPDESIGN_SLOW_TESTS') == '1':
        return

    skip_slow = pytest.mark.skip(reason='set HPDESIGN_SLOW_TESTS=1 to run')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def tmppath(tmpdir):
    yield Path(tmpdir)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope='session')
def instance4() -> Instance:
    return select_instance(4, 2)


@pytest.fixture(scope='session')
def instance8() -> Instance:
    return select_instance(8, 4)


@pytest.fixture(scope='session')
def instance10() -> Instance:
    return select_instance(10, 4)


@pytest.fixture(scope='session')
def hea_chain(instance4, instance8, instance10) -> List[Campaign]:
    """Noiseless hea-1 donation chain 4 -> 8 -> 10 with 10 runs each"""
    template = CampaignTemplate('hea-1', runs=10, seed=0)
    return run_campaign([instance4, instance8, instance10], template)


@pytest.fixture(scope='session')
def interp_qaoa(instance8, instance10) -> Dict[int, Campaign]:
    """qaoa-xyfc-di grown from p=1 to p=15, one run per instance"""
    template = CampaignTemplate(
        'qaoa-xyfc-di', layers=15, runs=1, seed=0,
        optimizer=OptimizerConfig(max_evals=1000))
    return {instance.n: run_campaign([instance], template)[0]
            for instance in (instance8, instance10)}
