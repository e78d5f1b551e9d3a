import json
from unittest import mock

import pytest

from hpdesign import cli
from hpdesign import instance_io


def run_cli(*argv) -> int:
    with pytest.raises(SystemExit) as e:
        cli.main(list(argv))
    return e.value.code


RUN_CONFIG = '''
[instance]
chain = 4:2

[ansatz]
variant = hea-1

[evaluation]
final_shots = 100

[optimizer]
max_evals = 20

[campaign]
runs = 2
seed = 5

[output]
csv = out/runs.csv
json = out/runs.json
'''


def test_depth(capsys):
    assert run_cli('depth', 'hea-1', '--n', '4') == 0
    out = capsys.readouterr().out
    assert out.startswith('n=4 variant=hea-1 layers=1 depth=7 params=16 ')
    assert 'cx=3' in out


def test_depth_dump(tmppath, capsys):
    dump = tmppath / 'circuit.json'
    assert run_cli('depth', 'qaoa-xyfc-di', '-p', '2', '--instance', '4:2',
                   '--dump', str(dump)) == 0
    assert 'params=4' in capsys.readouterr().out

    data = json.loads(dump.read_text())
    assert data['n'] == 4
    assert {g['gate'] for g in data['gates']} <= {'cx', 'rx', 'ry', 'rz', 'x'}


@pytest.mark.parametrize('argv', [
    ['depth', 'qaoa-x-ui', '--n', '4', '-p', '0'],
    ['depth', 'qaoa-zz-ui', '--n', '4'],
    ['depth', 'hea-1'],
    ['census'],
    ['instance'],
    [],
])
def test_usage_errors(argv):
    assert run_cli(*argv) == 1


def test_census_bound(capsys):
    assert run_cli('census', '40') == 2
    assert 'HPDESIGN_MAX_ENUMERATION' in capsys.readouterr().err


def test_census(tmppath, capsys, instance4):
    with mock.patch('hpdesign.config.OUTPUT_DIR', tmppath), \
            mock.patch('hpdesign.config.INSTANCE_DIR', tmppath / 'inst'):
        assert run_cli('census', '4') == 0

    lines = (tmppath / 'census-n4.csv').read_text().splitlines()
    assert lines[0] == 'schema,hpdesign.census,1'
    assert lines[1] == 'rank,moves,designability,contacts,sequences'
    assert lines[2] == '1,RUL,4,1,HPPH HPHH HHPH HHHH'

    written = instance_io.read_instance(tmppath / 'inst' / 'hp-n4-nh2.inst')
    assert written == instance4
    assert 'n=4: 5 structures' in capsys.readouterr().out


def test_instance(tmppath, capsys):
    out = tmppath / 'eight.inst'
    assert run_cli('instance', '--n', '8', '--fold', '1', '4', '--qubo',
                   '--out', str(out)) == 0
    stdout = capsys.readouterr().out
    assert 'nh 4\n' in stdout
    assert 'beta=1.0: probability' in stdout
    assert '"quadratic"' in stdout

    assert run_cli('instance', '--load', str(out)) == 0
    assert capsys.readouterr().out == out.read_text()


def test_instance_derive(tmppath):
    out = tmppath / 'derived.inst'
    assert run_cli('instance', '--n', '8', '--nh', '4', '--derive',
                   '--attempts', '200', '--seed', '3', '--out',
                   str(out)) == 0
    assert instance_io.read_instance(out).n_h == 4


def test_run_is_reproducible(tmppath, capsys):
    config = tmppath / 'exp.ini'
    config.write_text(RUN_CONFIG)

    assert run_cli('run', '--config', str(config)) == 0
    csv_path = tmppath / 'out' / 'runs.csv'
    json_path = tmppath / 'out' / 'runs.json'
    first = csv_path.read_bytes(), json_path.read_bytes()

    lines = csv_path.read_text().splitlines()
    assert lines[0] == 'schema,hpdesign.runs,1'
    assert lines[1].startswith('n,n_h,variant,mode,run,seed')
    assert len(lines) == 4
    assert json.loads(json_path.read_text())['schema'] == 'hpdesign.runs'

    assert run_cli('run', '--config', str(config)) == 0
    assert (csv_path.read_bytes(), json_path.read_bytes()) == first
    assert 'n=4 n_h=2 hea-1 exact' in capsys.readouterr().out


def test_run_overrides(tmppath):
    config = tmppath / 'exp.ini'
    config.write_text(RUN_CONFIG)
    assert run_cli('run', '--config', str(config), '--runs', '1',
                   '--mode', 'sampled', '--shots', '50') == 0

    lines = (tmppath / 'out' / 'runs.csv').read_text().splitlines()
    assert len(lines) == 3
    assert ',sampled,' in lines[2]


def test_run_interrupted(tmppath):
    config = tmppath / 'exp.ini'
    config.write_text(RUN_CONFIG)

    with mock.patch('hpdesign.vqa.campaign.iter_campaigns',
                    side_effect=KeyboardInterrupt):
        assert run_cli('run', '--config', str(config)) == 130

    lines = (tmppath / 'out' / 'runs.csv').read_text().splitlines()
    assert len(lines) == 2


def test_run_missing_config(tmppath):
    assert run_cli('run', '--config', str(tmppath / 'missing.ini')) == 1


def test_landscape(tmppath, capsys):
    out = tmppath / 'landscape.csv'
    assert run_cli('landscape', 'qaoa-x-ui', '--instance', '4:2',
                   '--beta-points', '8', '--gamma-points', '8',
                   '--compare', '8:4', '--out', str(out)) == 0

    lines = out.read_text().splitlines()
    assert lines[0] == 'schema,hpdesign.landscape,1'
    assert len(lines) == 10
    assert all(len(line.split(',')) == 9 for line in lines[1:])
    assert 'argmin quantile in 8:4' in capsys.readouterr().out


def test_landscape_rejects_hea():
    assert run_cli('landscape', 'hea-1', '--instance', '4:2') == 1
