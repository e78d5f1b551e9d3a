from dataclasses import replace
import math

import numpy as np
import pytest

from hpdesign import ansatz
from hpdesign.exceptions import ArityMismatch, ConfigException
from hpdesign.vqa import campaign
from hpdesign.vqa.campaign import Campaign, CampaignTemplate, RunRecord
from hpdesign.vqa.objective import Sampled
from hpdesign.vqa.optimizer import OptimizerConfig, OptResult


def quick(variant, **kwargs):
    settings = dict(optimizer=OptimizerConfig(max_evals=25), runs=2,
                    final_shots=200, seed=11)
    settings.update(kwargs)
    return CampaignTemplate(variant=variant, **settings)


def record(run, success_rate):
    result = OptResult(params=np.zeros(2), value=0.0, evals=1,
                       terminated_by='max_evals')
    return RunRecord(run=run, seed=run, initial_params=np.zeros(2),
                     result=result, counts={}, success_rate=success_rate,
                     exact_success=success_rate, stages=[result])


def test_interp_grow():
    assert campaign.interp_grow([0.4, 0.9]).tolist() == [0.4, 0.4, 0.9, 0.9]

    grown = campaign.interp_grow([1.0, 3.0, 2.0, 4.0])
    assert np.allclose(grown, [1.0, 2.0, 3.0, 2.0, 3.0, 4.0])

    with pytest.raises(ArityMismatch):
        campaign.interp_grow([1.0, 2.0, 3.0])


def test_donate(rng):
    small = np.arange(8, dtype=float)
    params = campaign.donate(small, 2, 4, rng)
    assert params.shape == (16,)

    for block in (0, 1):
        for q in (0, 1):
            for rotation in (0, 1):
                assert params[ansatz.hea_slot(4, block, q, rotation)] == \
                    small[ansatz.hea_slot(2, block, q, rotation)]

    fresh = [params[ansatz.hea_slot(4, block, q, rotation)]
             for block in (0, 1) for q in (2, 3) for rotation in (0, 1)]
    assert all(0 <= v < 2 * np.pi for v in fresh)

    with pytest.raises(ValueError):
        campaign.donate(small, 2, 2, rng)
    with pytest.raises(ArityMismatch):
        campaign.donate(np.zeros(7), 2, 4, rng)


def test_run_seed(instance4, instance8):
    assert campaign.run_seed(0, instance4, 1) == \
        campaign.run_seed(0, instance4, 1)
    assert campaign.run_seed(0, instance4, 1) != \
        campaign.run_seed(0, instance4, 2)
    assert campaign.run_seed(0, instance4, 1) != \
        campaign.run_seed(0, instance8, 1)


def test_template_validation():
    with pytest.raises(ConfigException):
        CampaignTemplate('hea-1', qaoa_init='zero')
    with pytest.raises(ConfigException):
        CampaignTemplate('hea-1', runs=0)
    with pytest.raises(ConfigException):
        CampaignTemplate('hea-1', final_shots=0)

    assert CampaignTemplate('hea-1').donates
    assert not CampaignTemplate('qaoa-x-ui').donates
    assert CampaignTemplate('qaoa-x-ui', donation=True).donates


def test_campaign_statistics(instance4):
    c = Campaign(instance=instance4, variant='hea-1', mode='exact', layers=1,
                 runs=[record(0, 0.2), record(1, 0.4), record(2, 0.4)])
    assert c.mean_success == pytest.approx(1 / 3)
    assert c.best_run.run == 1

    c.runs = c.runs[:2]
    assert c.standard_error == pytest.approx(0.1)
    c.runs = c.runs[:1]
    assert c.standard_error == 0.0
    assert 'n=4 n_h=2 hea-1 exact' in c.summary()


def test_hea_chain_donates(instance4, instance8):
    template = quick('hea-1')
    first, second = campaign.run_campaign([instance4, instance8], template)

    assert len(first.runs) == len(second.runs) == 2
    for c in (first, second):
        for r in c.runs:
            assert r.success_rate == r.exact_success
            assert sum(r.counts.values()) == 200

    donor = first.best_run.result.params
    for r in second.runs:
        for block in (0, 1):
            for q in range(4):
                for rotation in (0, 1):
                    assert r.initial_params[
                        ansatz.hea_slot(8, block, q, rotation)] == \
                        donor[ansatz.hea_slot(4, block, q, rotation)]


def test_campaigns_are_reproducible(instance4):
    template = quick('qaoa-xyfc-di', mode=Sampled(shots=500))
    a = campaign.run_campaign([instance4], template)[0]
    b = campaign.run_campaign([instance4], template)[0]
    assert a.to_json() == b.to_json()

    for r in a.runs:
        assert r.success_rate * 200 == pytest.approx(
            r.counts.get(instance4.solution.bits, 0))


def test_qaoa_growth(instance4):
    template = quick('qaoa-x-ui', layers=3, runs=1)
    [result] = campaign.run_campaign([instance4], template)
    stages = result.runs[0].stages
    assert [s.params.size for s in stages] == [2, 4, 6]
    assert result.runs[0].initial_params.tolist() == [np.pi, np.pi]

    template = replace(template, grow=False)
    [result] = campaign.run_campaign([instance4], template)
    assert len(result.runs[0].stages) == 1
    assert result.runs[0].initial_params.size == 6


def test_warm_start_without_optimization(instance4):
    template = quick('qaoa-xyfc-di', optimizer=OptimizerConfig(max_evals=0),
                     warm_start=(0.0, 0.0), runs=1)
    [result] = campaign.run_campaign([instance4], template)
    run = result.runs[0]
    assert run.result.evals == 1
    assert run.result.params.tolist() == [0.0, 0.0]
    # the Dicke state averages the single contact over 6 sequences
    assert run.result.value == pytest.approx(-1 / 6)
    assert run.exact_success == pytest.approx(1 / 6)


def test_run_count_override(instance4):
    template = quick('hea-1', optimizer=OptimizerConfig(max_evals=0))
    [result] = campaign.run_campaign([instance4], template, runs=1)
    assert len(result.runs) == 1


def test_chain_must_be_ordered(instance4, instance8):
    template = quick('hea-1', optimizer=OptimizerConfig(max_evals=0), runs=1)
    with pytest.raises(ValueError):
        campaign.run_campaign([instance8, instance4], template)


def test_continue_chain(instance4, instance8):
    template = quick('hea-1', optimizer=OptimizerConfig(max_evals=0), runs=1)
    [previous] = campaign.run_campaign([instance4], template)

    [result] = campaign.iter_campaigns([instance8], template, previous)
    donor = previous.best_run.result.params
    assert result.runs[0].initial_params[0] == donor[0]

    sampled = replace(template, mode=Sampled(shots=100))
    with pytest.raises(ConfigException):
        list(campaign.iter_campaigns([instance8], sampled, previous))


def random_guess(instance) -> float:
    return 1 / math.comb(instance.n, instance.n_h)


@pytest.mark.slow
@pytest.mark.parametrize('n', [8, 10])
def test_interp_grown_qaoa_solves(interp_qaoa, n):
    result = interp_qaoa[n]
    run = result.runs[0]
    assert [s.params.size for s in run.stages] == list(range(2, 32, 2))
    assert run.exact_success >= 10 * random_guess(result.instance)


@pytest.mark.slow
def test_hea_donation_chain_solves(hea_chain):
    assert [c.instance.n for c in hea_chain] == [4, 8, 10]
    for c in hea_chain:
        assert len(c.runs) == 10
        assert c.standard_error == pytest.approx(
            np.std(c.success_rates, ddof=1) / math.sqrt(10))

    # four beads leave room for at most six times the random guess
    first, *rest = hea_chain
    assert first.mean_success >= 3 * random_guess(first.instance)
    for c in rest:
        assert c.mean_success >= 10 * random_guess(c.instance)
