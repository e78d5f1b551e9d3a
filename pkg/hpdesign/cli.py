#!/usr/bin/env python

import argparse
import json
import logging
from pathlib import Path
import sys
from typing import List, Optional

import numpy as np

from hpdesign import ansatz
from hpdesign import config
from hpdesign import experiment
from hpdesign import instance_io
from hpdesign import paths
from hpdesign import report
from hpdesign.exceptions import (
    BoundExceeded, ConfigException, HpDesignException)
from hpdesign.lattice import (
    REFERENCE_INSTANCES, ContactMap, Instance, design_census, fold_verify,
    select_instance)
from hpdesign.qubo import build_qubo
from hpdesign.quantum.gates import decompose
from hpdesign.vqa import campaign
from hpdesign.vqa import landscape


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BOUND = 2
EXIT_INTERRUPTED = 130


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors, which is taken by
    BoundExceeded here"""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def reference_n_h(n: int, n_h: Optional[int]) -> int:
    if n_h is not None:
        return n_h
    if n in REFERENCE_INSTANCES:
        return REFERENCE_INSTANCES[n][0]
    return n // 2


def instance_from_arg(text: str) -> Instance:
    """An instance file, or `n:n_h` / `n` for the selected instance"""
    if Path(text).is_file():
        return instance_io.read_instance(Path(text))

    chain = experiment.parse_chain(text)
    if len(chain) != 1:
        raise ConfigException(f'Expected one instance, got "{text}"')
    return select_instance(*chain[0])


def cmd_census(args) -> int:
    n = args.n
    n_h = reference_n_h(n, args.nh)

    census = design_census(n)
    census_file = args.out or paths.census_path(n)
    report.write_census_csv(census, census_file)

    instance = select_instance(n, n_h)
    instance_file = paths.instance_path(n, n_h, args.instance_dir)
    instance_io.write_instance(instance, instance_file)

    print(f'n={n}: {len(census.structures)} structures, '
          f'{int((census.designability > 0).sum())} designable, '
          f'unique fraction {census.unique_fraction:.4f}')
    print(f'{instance.label} {instance.structure.moves} '
          f'e_min={instance.e_min} solution={instance.solution.as_letters()}')
    print(f'Wrote {census_file} and {instance_file}')
    return EXIT_OK


def cmd_instance(args) -> int:
    if args.load:
        instance = instance_io.read_instance(args.load)
    elif args.n is None:
        raise ConfigException('instance needs --n or --load')
    elif args.derive:
        n_h = reference_n_h(args.n, args.nh)
        e_min = args.emin
        if e_min is None and args.nh is None \
                and args.n in REFERENCE_INSTANCES:
            e_min = REFERENCE_INSTANCES[args.n][1]
        instance = instance_io.search_instance(
            args.n, n_h, np.random.default_rng(args.seed),
            attempts=args.attempts, e_min=e_min)
    else:
        instance = select_instance(args.n, reference_n_h(args.n, args.nh))

    if args.out:
        instance_io.write_instance(instance, args.out)
    print(instance_io.format_instance(instance), end='')

    if args.fold:
        for beta in args.fold:
            fold = fold_verify(instance.solution, instance.structure, beta)
            print(f'beta={beta}: probability {fold.probability:.6f}, '
                  f'unique target ground state '
                  f'{fold.unique_ground_state_is_target}')
    if args.qubo:
        model = build_qubo(instance.contact_map, instance.n_h, args.lam)
        print(json.dumps(model.to_json(), indent=2))
    return EXIT_OK


def _run_overrides(args) -> dict:
    overrides: dict = {}

    def put(section: str, key: str, value):
        if value is not None:
            overrides.setdefault(section, {})[key] = str(value)

    put('campaign', 'runs', args.runs)
    put('campaign', 'seed', args.seed)
    put('optimizer', 'max_evals', args.max_evals)
    put('evaluation', 'mode', args.mode)
    put('evaluation', 'shots', args.shots)
    put('output', 'name', args.name)
    return overrides


def cmd_run(args) -> int:
    cfg = experiment.load_config(args.config, _run_overrides(args))
    instances = experiment.resolve_instances(cfg)

    finished: List[campaign.Campaign] = []
    status = EXIT_OK
    try:
        for result in campaign.iter_campaigns(instances, cfg.template):
            finished.append(result)
            print(result.summary())
    except KeyboardInterrupt:
        print(f'Interrupted, writing {len(finished)} finished campaigns',
              file=sys.stderr)
        status = EXIT_INTERRUPTED

    report.write_runs_csv(finished, cfg.csv_path)
    report.write_runs_json(finished, cfg.json_path)
    print(f'Wrote {cfg.csv_path} and {cfg.json_path}')
    return status


def cmd_depth(args) -> int:
    variant = ansatz.parse_variant(args.variant)

    if args.instance:
        instance = instance_from_arg(args.instance)
        cm, n_h = instance.contact_map, instance.n_h
    else:
        # every pair is coupled for lam > 1/2, the contacts do not change
        # the gate structure
        cm = ContactMap(args.n, frozenset())
        n_h = reference_n_h(args.n, args.nh)

    if isinstance(variant, ansatz.QaoaVariant):
        layers = args.layers
    else:
        layers = variant

    pc = ansatz.build(args.variant, build_qubo(cm, n_h, args.lam), layers)
    circuit = ansatz.bind(pc, np.zeros(pc.num_params))
    native = decompose(circuit)

    ops = ' '.join(
        f'{kind}={count}' for kind, count in native.count_ops().items())
    print(f'n={pc.n} variant={pc.variant} layers={pc.layers} '
          f'depth={ansatz.depth(circuit)} params={pc.num_params} {ops}')

    if args.dump:
        report.write_json(native.to_json(), args.dump)
    return EXIT_OK


def cmd_landscape(args) -> int:
    grid = landscape.Grid(
        beta_points=args.beta_points, gamma_points=args.gamma_points)
    instance = instance_from_arg(args.instance)
    scan = landscape.landscape_scan(instance, args.variant, grid, args.lam)

    out = args.out or paths.output_path(
        paths.OutputKind.LANDSCAPE,
        f'{args.variant}-n{instance.n}-nh{instance.n_h}')
    report.write_landscape_csv(scan, out)

    beta, gamma = scan.argmin()
    print(f'{instance.label} {args.variant}: minimum '
          f'{scan.values.min():.6f} at beta={beta:.4f} gamma={gamma:.4f}')

    if args.compare:
        other = landscape.landscape_scan(
            instance_from_arg(args.compare), args.variant, grid, args.lam)
        print(f'argmin quantile in {other.instance.label}: '
              f'{landscape.argmin_quantile(scan, other):.4f}')
    print(f'Wrote {out}')
    return EXIT_OK


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog='hpdesign',
        description='Lattice protein design with simulated variational '
                    'quantum algorithms')
    subparsers = parser.add_subparsers(dest='subparser_name')

    census_parser = subparsers.add_parser(
        'census', help='Enumerate all structures of n beads')
    census_parser.add_argument('n', type=int, help='Number of beads')
    census_parser.add_argument(
        '--nh', type=int, help='Number of H beads of the selected instance')
    census_parser.add_argument(
        '--out', type=Path, help='Path of the designability table')
    census_parser.add_argument(
        '--instance-dir', dest='instance_dir', type=Path,
        help='Directory the selected instance is written to')

    instance_parser = subparsers.add_parser(
        'instance', help='Select, derive or load one design instance')
    instance_parser.add_argument('--n', type=int, help='Number of beads')
    instance_parser.add_argument('--nh', type=int, help='Number of H beads')
    instance_parser.add_argument(
        '--load', type=Path, help='Read and re-verify an instance file')
    instance_parser.add_argument(
        '--derive', action='store_true', default=False,
        help='Search random compact structures instead of the census')
    instance_parser.add_argument(
        '--emin', type=int, help='Required minimum energy for --derive')
    instance_parser.add_argument(
        '--attempts', type=int, default=100,
        help='Number of structures --derive tries')
    instance_parser.add_argument(
        '--seed', type=int, default=0, help='Seed of --derive')
    instance_parser.add_argument(
        '--fold', type=float, nargs='+', metavar='BETA',
        help='Check that the solution folds onto the structure')
    instance_parser.add_argument(
        '--qubo', action='store_true', default=False,
        help='Print the QUBO coefficients as JSON')
    instance_parser.add_argument(
        '--lambda', dest='lam', type=float, default=config.DEFAULT_LAMBDA)
    instance_parser.add_argument(
        '--out', type=Path, help='Write the instance file')

    run_parser = subparsers.add_parser(
        'run', help='Run the campaigns of an experiment file')
    run_parser.add_argument(
        '--config', type=Path, required=True, help='Experiment INI file')
    run_parser.add_argument('--runs', type=int)
    run_parser.add_argument('--seed', type=int)
    run_parser.add_argument('--max-evals', dest='max_evals', type=int)
    run_parser.add_argument(
        '--mode', choices=['exact', 'sampled', 'noisy'])
    run_parser.add_argument('--shots', type=int)
    run_parser.add_argument('--name', help='Name of the output files')

    depth_parser = subparsers.add_parser(
        'depth', help='Report circuit depth and gate counts')
    depth_parser.add_argument(
        'variant', help=f'One of {", ".join(ansatz.variant_names())}')
    depth_parser.add_argument(
        '--layers', '-p', type=int, default=1, help='QAOA layers')
    depth_parser.add_argument('--n', type=int, help='Number of qubits')
    depth_parser.add_argument('--nh', type=int, help='Number of H beads')
    depth_parser.add_argument(
        '--instance', help='Instance file or n:n_h instead of --n')
    depth_parser.add_argument(
        '--lambda', dest='lam', type=float, default=config.DEFAULT_LAMBDA)
    depth_parser.add_argument(
        '--dump', type=Path, help='Write the native gate list as JSON')

    landscape_parser = subparsers.add_parser(
        'landscape', help='Scan the p=1 QAOA energy on a grid')
    landscape_parser.add_argument('variant')
    landscape_parser.add_argument(
        '--instance', required=True, help='Instance file or n:n_h')
    landscape_parser.add_argument(
        '--compare', help='Second instance to locate the minimum in')
    landscape_parser.add_argument(
        '--beta-points', dest='beta_points', type=int,
        default=config.LANDSCAPE_RESOLUTION)
    landscape_parser.add_argument(
        '--gamma-points', dest='gamma_points', type=int,
        default=config.LANDSCAPE_RESOLUTION)
    landscape_parser.add_argument(
        '--lambda', dest='lam', type=float, default=config.DEFAULT_LAMBDA)
    landscape_parser.add_argument('--out', type=Path)

    return parser


COMMANDS = {
    'census': cmd_census,
    'instance': cmd_instance,
    'run': cmd_run,
    'depth': cmd_depth,
    'landscape': cmd_landscape,
}


def main(argv: Optional[List[str]] = None):
    logging.basicConfig(level=config.LOG_LEVEL)

    parser = build_parser()
    args = parser.parse_args(argv)

    if args.subparser_name not in COMMANDS:
        parser.print_usage()
        sys.exit(EXIT_USAGE)
    if args.subparser_name == 'depth' and args.n is None \
            and args.instance is None:
        parser.error('depth needs --n or --instance')

    try:
        status = COMMANDS[args.subparser_name](args)
    except BoundExceeded as e:
        print(e, file=sys.stderr)
        status = EXIT_BOUND
    except (HpDesignException, ValueError) as e:
        print(f'{type(e).__name__}: {e}', file=sys.stderr)
        status = EXIT_USAGE

    sys.exit(status)


if __name__ == '__main__':
    main()
