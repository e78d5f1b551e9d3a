from pathlib import Path
from unittest import mock

import pytest

from hpdesign import paths


def test_instance_path(tmppath):
    assert paths.instance_filename(18, 8) == 'hp-n18-nh8.inst'
    assert paths.instance_path(18, 8, tmppath) == tmppath / 'hp-n18-nh8.inst'

    with mock.patch('hpdesign.config.INSTANCE_DIR', Path('/data/inst')):
        assert paths.instance_path(4, 2) == Path('/data/inst/hp-n4-nh2.inst')


def test_output_paths(tmppath):
    with mock.patch('hpdesign.config.OUTPUT_DIR', tmppath):
        assert paths.census_path(10) == tmppath / 'census-n10.csv'
        assert paths.output_path(paths.OutputKind.RUNS_CSV, 'a') \
            == tmppath / 'a.csv'
        assert paths.output_path(paths.OutputKind.RUNS_JSON, 'a') \
            == tmppath / 'a.json'
        assert paths.output_path(paths.OutputKind.LANDSCAPE, 'a') \
            == tmppath / 'a-landscape.csv'

    with pytest.raises(ValueError):
        paths.output_path(paths.OutputKind.INSTANCE, 'a')
