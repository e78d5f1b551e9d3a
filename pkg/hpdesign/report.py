import csv
import io
import json
import os
from pathlib import Path
import tempfile
from typing import Iterable, List

from hpdesign.lattice import Census, contact_map
from hpdesign.vqa.campaign import Campaign
from hpdesign.vqa.landscape import Landscape


SCHEMA_VERSION = 1

RUN_COLUMNS = [
    'n', 'n_h', 'variant', 'mode', 'run', 'seed', 'evals', 'final_energy',
    'success_rate', 'exact_success', 'terminated_by']


def atomic_write(path: Path, text: str):
    """Write to a temporary file next to `path` and rename it into place"""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _csv_text(schema: str, rows: Iterable[List]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['schema', f'hpdesign.{schema}', SCHEMA_VERSION])
    writer.writerows(rows)
    return buffer.getvalue()


def run_rows(campaigns: Iterable[Campaign]) -> List[List]:
    rows: List[List] = [RUN_COLUMNS]
    for campaign in campaigns:
        for record in campaign.runs:
            rows.append([
                campaign.instance.n, campaign.instance.n_h, campaign.variant,
                campaign.mode, record.run, record.seed,
                sum(stage.evals for stage in record.stages),
                record.result.value, record.success_rate,
                record.exact_success, record.result.terminated_by])
    return rows


def write_runs_csv(campaigns: Iterable[Campaign], path: Path):
    atomic_write(path, _csv_text('runs', run_rows(campaigns)))


def write_runs_json(campaigns: Iterable[Campaign], path: Path):
    document = {
        'schema': 'hpdesign.runs',
        'version': SCHEMA_VERSION,
        'campaigns': [c.to_json() for c in campaigns],
    }
    atomic_write(path, json.dumps(document, indent=2) + '\n')


def write_census_csv(census: Census, path: Path):
    """One row per designable structure; the designing sequences are
    written as space separated H/P strings"""
    rows: List[List] = [
        ['rank', 'moves', 'designability', 'contacts', 'sequences']]
    designing = census.designing_table()
    for rank, index in enumerate(census.ranking(), start=1):
        structure = census.structures[index]
        sequences = ' '.join(s.as_letters() for s in designing[index])
        rows.append([rank, structure.moves,
                     int(census.designability[index]),
                     len(contact_map(structure)), sequences])
    atomic_write(path, _csv_text('census', rows))


def write_landscape_csv(landscape: Landscape, path: Path):
    """Header row of gamma values, then one row per beta"""
    rows: List[List] = [['beta\\gamma'] + landscape.gammas.tolist()]
    for beta, values in zip(landscape.betas, landscape.values):
        rows.append([float(beta)] + values.tolist())
    atomic_write(path, _csv_text('landscape', rows))


def write_json(data: dict, path: Path):
    atomic_write(path, json.dumps(data, indent=2) + '\n')
