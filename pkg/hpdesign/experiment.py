"""Declarative experiment configuration.

Experiments are INI files read with configparser:

    [instance]
    chain = 4:2, 8:4      # n:n_h pairs, a bare n uses the reference n_h,
                          # "table" takes every reference n in the bound
    files =               # instance files, comma separated
    lambda = 1.1

    [ansatz]
    variant = hea-1
    layers = 1            # p for QAOA, implied by the HEA variants
    interp = yes          # grow QAOA from p=1

    [evaluation]
    mode = exact          # exact, sampled or noisy
    shots = 10000
    final_shots = 10000
    p1 = 3e-4
    p2 = 3e-3
    p_ro = 2e-2
    exact_mixer = no

    [optimizer]
    max_evals = 10000     # 0 only evaluates the starting point
    tol = 1e-4
    rhobeg = 0.5

    [campaign]
    runs = 10
    seed = 0
    donation = auto       # auto, yes or no
    qaoa_init = pi        # pi or random
    warm_start =          # JSON list of parameters

    [output]
    name = experiment
    csv =                 # paths relative to the experiment file,
    json =                # default OUTPUT_DIR/<name>.csv and .json
"""
import configparser
from dataclasses import dataclass
import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from hpdesign import ansatz
from hpdesign import config
from hpdesign import instance_io
from hpdesign import paths
from hpdesign.exceptions import BadVariant, ConfigException
from hpdesign.lattice import REFERENCE_INSTANCES, Instance, select_instance
from hpdesign.quantum.noise import NoiseModel
from hpdesign.vqa.campaign import CampaignTemplate
from hpdesign.vqa.objective import (
    EvaluationMode, ExactExpectation, Noisy, Sampled)
from hpdesign.vqa.optimizer import OptimizerConfig


DEFAULTS = {
    'instance': {'chain': '', 'files': '',
                 'lambda': str(config.DEFAULT_LAMBDA)},
    'ansatz': {'layers': '', 'interp': 'yes'},
    'evaluation': {
        'mode': 'exact',
        'shots': str(config.DEFAULT_SHOTS),
        'final_shots': str(config.DEFAULT_FINAL_SHOTS),
        'p1': str(config.DEFAULT_P1),
        'p2': str(config.DEFAULT_P2),
        'p_ro': str(config.DEFAULT_P_RO),
        'exact_mixer': 'no',
    },
    'optimizer': {
        'max_evals': str(config.DEFAULT_MAX_EVALS),
        'tol': str(config.DEFAULT_TOL),
        'rhobeg': str(config.DEFAULT_RHOBEG),
    },
    'campaign': {
        'runs': str(config.DEFAULT_RUNS),
        'seed': '0',
        'donation': 'auto',
        'qaoa_init': 'pi',
        'warm_start': '',
    },
    'output': {'name': 'experiment', 'csv': '', 'json': ''},
}


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    chain: Tuple[Tuple[int, int], ...]
    files: Tuple[Path, ...]
    template: CampaignTemplate
    csv_path: Path
    json_path: Path


def parse_chain(text: str) -> List[Tuple[int, int]]:
    text = text.strip()
    if text == 'table':
        return [(n, n_h)
                for n, (n_h, _) in sorted(REFERENCE_INSTANCES.items())
                if n <= config.MAX_ENUMERATION_N]

    chain = []
    for entry in filter(None, (e.strip() for e in text.split(','))):
        n_text, _, n_h_text = entry.partition(':')
        try:
            n = int(n_text)
            if n_h_text:
                n_h = int(n_h_text)
            else:
                n_h = REFERENCE_INSTANCES[n][0]
        except ValueError:
            raise ConfigException(f'Invalid chain entry "{entry}"')
        except KeyError:
            raise ConfigException(
                f'No reference H count for n={n}, write it as {n}:<n_h>')
        chain.append((n, n_h))
    return chain


def _mode(section: configparser.SectionProxy) -> EvaluationMode:
    name = section['mode']
    shots = section.getint('shots')
    if name == 'exact':
        return ExactExpectation()
    if name == 'sampled':
        return Sampled(shots=shots)
    if name == 'noisy':
        noise = NoiseModel(p1=section.getfloat('p1'),
                           p2=section.getfloat('p2'),
                           p_ro=section.getfloat('p_ro'))
        return Noisy(noise=noise, shots=shots)
    raise ConfigException(
        f'Unknown evaluation mode "{name}", use exact, sampled or noisy')


def _donation(text: str) -> Optional[bool]:
    text = text.strip().lower()
    if text == 'auto':
        return None
    if text in ('yes', 'true', 'on', '1'):
        return True
    if text in ('no', 'false', 'off', '0'):
        return False
    raise ConfigException(f'donation must be auto, yes or no, got "{text}"')


def _warm_start(text: str) -> Optional[Tuple[float, ...]]:
    if not text.strip():
        return None
    try:
        values = json.loads(text)
        return tuple(float(v) for v in values)
    except (ValueError, TypeError):
        raise ConfigException(f'warm_start is not a JSON list: {text}')


def parse_config(
        text: str, source: str = '<string>',
        overrides: Optional[Dict[str, Dict[str, str]]] = None,
        base: Optional[Path] = None) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=('#',))
    parser.read_dict(DEFAULTS)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigException(f'{source}: {e}')
    if overrides:
        parser.read_dict(overrides)

    base = Path('.') if base is None else base

    try:
        variant = parser['ansatz']['variant']
    except KeyError:
        raise ConfigException(f'{source}: [ansatz] needs a variant')

    try:
        is_qaoa = ansatz.is_qaoa(variant)
        ev = parser['evaluation']
        opt = parser['optimizer']
        camp = parser['campaign']
        layers_text = parser['ansatz']['layers'].strip()
        if is_qaoa:
            layers = int(layers_text) if layers_text else 1
            if layers < 1:
                raise ConfigException(f'QAOA needs p >= 1, got {layers}')
        else:
            layers = ansatz.HEA_VARIANTS[variant]
            if layers_text and int(layers_text) != layers:
                raise ConfigException(
                    f'{variant} has {layers} layers, '
                    f'got layers = {layers_text}')

        max_evals = opt.getint('max_evals')
        if max_evals < 0:
            raise ConfigException(f'max_evals must be >= 0, got {max_evals}')

        template = CampaignTemplate(
            variant=variant,
            layers=layers,
            mode=_mode(ev),
            lam=parser['instance'].getfloat('lambda'),
            optimizer=OptimizerConfig(
                max_evals=max_evals, tol=opt.getfloat('tol'),
                rhobeg=opt.getfloat('rhobeg')),
            runs=camp.getint('runs'),
            seed=camp.getint('seed'),
            final_shots=ev.getint('final_shots'),
            qaoa_init=camp['qaoa_init'],
            grow=parser['ansatz'].getboolean('interp'),
            donation=_donation(camp['donation']),
            exact_mixer=ev.getboolean('exact_mixer'),
            warm_start=_warm_start(camp['warm_start']),
        )
    except (BadVariant, ValueError) as e:
        raise ConfigException(f'{source}: {e}')

    if template.exact_mixer and ev['mode'] == 'noisy':
        raise ConfigException(
            f'{source}: the exact sector mixer cannot be simulated with noise')
    if template.lam <= 0:
        raise ConfigException(f'{source}: lambda must be positive')

    chain = tuple(parse_chain(parser['instance']['chain']))
    files = tuple(
        base / f.strip()
        for f in parser['instance']['files'].split(',') if f.strip())
    for f in files:
        if not f.is_file():
            raise ConfigException(f'{source}: instance file {f} not found')
    if not chain and not files:
        raise ConfigException(f'{source}: no instances configured')

    out = parser['output']
    name = out['name']
    csv_path = base / out['csv'] if out['csv'] \
        else paths.output_path(paths.OutputKind.RUNS_CSV, name)
    json_path = base / out['json'] if out['json'] \
        else paths.output_path(paths.OutputKind.RUNS_JSON, name)

    return ExperimentConfig(
        name=name, chain=chain, files=files, template=template,
        csv_path=csv_path, json_path=json_path)


def load_config(path: Path, overrides: Optional[Dict[str, Dict[str, str]]]
                = None) -> ExperimentConfig:
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigException(f'Cannot read config {path}: {e}')
    return parse_config(text, str(path), overrides, base=path.parent)


def resolve_instances(cfg: ExperimentConfig) -> List[Instance]:
    """Selected and loaded instances, ordered by chain length"""
    instances = [select_instance(n, n_h) for n, n_h in cfg.chain]
    instances += [instance_io.read_instance(f) for f in cfg.files]
    return sorted(instances, key=lambda i: i.n)
