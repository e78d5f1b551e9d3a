from pathlib import Path
from unittest import mock

import pytest

from hpdesign import experiment
from hpdesign import instance_io
from hpdesign.exceptions import ConfigException
from hpdesign.vqa.objective import ExactExpectation, Noisy, Sampled


MINIMAL = '''
[instance]
chain = 4:2, 8

[ansatz]
variant = hea-1
'''


def config_text(**sections):
    lines = []
    for section, values in sections.items():
        lines.append(f'[{section}]')
        lines += [f'{k} = {v}' for k, v in values.items()]
    return '\n'.join(lines) + '\n'


def test_defaults(tmppath):
    with mock.patch('hpdesign.config.OUTPUT_DIR', tmppath):
        cfg = experiment.parse_config(MINIMAL)

    assert cfg.name == 'experiment'
    assert cfg.chain == ((4, 2), (8, 4))
    assert cfg.files == ()
    assert cfg.csv_path == tmppath / 'experiment.csv'
    assert cfg.json_path == tmppath / 'experiment.json'

    template = cfg.template
    assert template.variant == 'hea-1'
    assert template.layers == 1
    assert template.mode == ExactExpectation()
    assert template.lam == pytest.approx(1.1)
    assert template.runs == 10
    assert template.donates
    assert template.warm_start is None


def test_parse_chain():
    assert experiment.parse_chain('4, 10:5') == [(4, 2), (10, 5)]
    assert experiment.parse_chain('') == []

    with mock.patch('hpdesign.config.MAX_ENUMERATION_N', 10):
        assert experiment.parse_chain('table') == [(4, 2), (8, 4), (10, 4)]

    with pytest.raises(ConfigException):
        experiment.parse_chain('5')
    with pytest.raises(ConfigException):
        experiment.parse_chain('4:two')


def test_qaoa_settings():
    text = config_text(
        instance={'chain': '4:2', 'lambda': '2.0'},
        ansatz={'variant': 'qaoa-xyring-di', 'layers': '5', 'interp': 'no'},
        evaluation={'mode': 'noisy', 'shots': '500', 'p1': '0.001'},
        optimizer={'max_evals': '0'},
        campaign={'runs': '3', 'seed': '9', 'qaoa_init': 'random',
                  'warm_start': '[0.1, 0.2]'},
        output={'name': 'q', 'csv': 'out/q.csv'})
    cfg = experiment.parse_config(text)

    template = cfg.template
    assert template.layers == 5
    assert not template.grow
    assert not template.donates
    assert isinstance(template.mode, Noisy)
    assert template.mode.shots == 500
    assert template.mode.noise.p1 == pytest.approx(0.001)
    assert template.optimizer.max_evals == 0
    assert template.lam == pytest.approx(2.0)
    assert (template.runs, template.seed) == (3, 9)
    assert template.qaoa_init == 'random'
    assert template.warm_start == (0.1, 0.2)
    assert cfg.csv_path == Path('out/q.csv')


def test_overrides():
    cfg = experiment.parse_config(MINIMAL, overrides={
        'campaign': {'runs': '2'},
        'evaluation': {'mode': 'sampled', 'shots': '64'}})
    assert cfg.template.runs == 2
    assert cfg.template.mode == Sampled(shots=64)


@pytest.mark.parametrize('sections', [
    {'instance': {'chain': '4'}},
    {'instance': {'chain': '4'}, 'ansatz': {'variant': 'qaoa-yy-ui'}},
    {'instance': {'chain': '4'},
     'ansatz': {'variant': 'hea-2', 'layers': '1'}},
    {'instance': {'chain': '4'},
     'ansatz': {'variant': 'qaoa-x-ui', 'layers': '0'}},
    {'instance': {'chain': '4'}, 'ansatz': {'variant': 'hea-1'},
     'evaluation': {'mode': 'fast'}},
    {'instance': {'chain': '4'}, 'ansatz': {'variant': 'hea-1'},
     'optimizer': {'max_evals': '-1'}},
    {'instance': {'chain': '4'}, 'ansatz': {'variant': 'hea-1'},
     'campaign': {'donation': 'maybe'}},
    {'instance': {'chain': '4'}, 'ansatz': {'variant': 'hea-1'},
     'campaign': {'warm_start': '0.1, 0.2'}},
    {'instance': {'chain': '4'}, 'ansatz': {'variant': 'hea-1'},
     'campaign': {'runs': '0'}},
    {'instance': {'chain': '4', 'lambda': '0'},
     'ansatz': {'variant': 'hea-1'}},
    {'instance': {'chain': '4'},
     'ansatz': {'variant': 'qaoa-xyfc-di'},
     'evaluation': {'mode': 'noisy', 'exact_mixer': 'yes'}},
    {'ansatz': {'variant': 'hea-1'}},
    {'instance': {'files': 'missing.inst'}, 'ansatz': {'variant': 'hea-1'}},
])
def test_invalid_configs(sections):
    with pytest.raises(ConfigException):
        experiment.parse_config(config_text(**sections))


def test_broken_ini():
    with pytest.raises(ConfigException):
        experiment.parse_config('variant = hea-1\n')


def test_load_config_with_files(tmppath, instance8):
    instance_io.write_instance(instance8, tmppath / 'eight.inst')
    path = tmppath / 'exp.ini'
    path.write_text(config_text(
        instance={'chain': '4', 'files': 'eight.inst'},
        ansatz={'variant': 'hea-2'}))

    cfg = experiment.load_config(path)
    assert cfg.files == (tmppath / 'eight.inst',)
    assert cfg.template.layers == 2

    instances = experiment.resolve_instances(cfg)
    assert [i.label for i in instances] == ['4:2', '8:4']
    assert instances[1] == instance8

    with pytest.raises(ConfigException):
        experiment.load_config(tmppath / 'missing.ini')


def test_instances_are_ordered():
    cfg = experiment.parse_config(config_text(
        instance={'chain': '8:4, 4:2'}, ansatz={'variant': 'hea-1'}))
    assert cfg.chain == ((8, 4), (4, 2))
    assert [i.n for i in experiment.resolve_instances(cfg)] == [4, 8]
