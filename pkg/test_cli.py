from pathlib import Path

import numpy as np
import pytest

from commands.ablate import comparison_rows, directional_check, plan_runs
from commands.heatmap import rebuild_heatmap
from diagnostics import HeatmapAccumulator
from fog import main
from models.run_config import resolve_run_config
from utils.csv_io import read_rows
from utils.decorators import EXIT_FAILED, EXIT_OK, EXIT_USAGE

CONFIG_DIR = Path(__file__).resolve().parent / 'configs'


def test_verify_theorems_passes(tmp_path):
    code = main(['verify-theorems', '--profile', 'testing', '--skip-figure', '--out', str(tmp_path)])
    assert code == EXIT_OK
    rows = read_rows(tmp_path / 'verification.csv')
    assert rows and all(row['pass'] == '1' for row in rows)
    assert (tmp_path / 'config.resolved.json').exists()


def test_verify_theorems_corrupted_sampler_fails(tmp_path):
    code = main(['verify-theorems', '--profile', 'testing', '--skip-figure', '--corrupt-sampler',
                 '--out', str(tmp_path)])
    assert code == EXIT_FAILED


def test_single_seed_stderr_is_wide(tmp_path):
    main(['verify-theorems', '--profile', 'testing', '--skip-figure', '--seeds', '1',
          '--out', str(tmp_path)])
    rows = [r for r in read_rows(tmp_path / 'verification.csv') if r['theorem'] == 'thm1_mc']
    assert rows and all(r['stderr'] == 'inf' for r in rows)


@pytest.mark.parametrize('override', ['agent.no_such_key=1', 'nosection.key=1', 'agent.gamma=2',
                                      'replay.kind="lifo"', 'justtext',
                                      'agent.replay_ratio="abc"', 'run.env_steps="many"',
                                      'growth.resets=1', 'agent.batch_size=32.5'])
def test_bad_config_is_usage_error(tmp_path, override):
    code = main(['train', '--profile', 'testing', '--set', override, '--out', str(tmp_path)])
    assert code == EXIT_USAGE
    assert not (tmp_path / 'config.resolved.json').exists()


def test_mistyped_value_is_usage_error_for_theorems(tmp_path):
    code = main(['verify-theorems', '--profile', 'testing', '--skip-figure',
                 '--set', 'agent.replay_ratio="abc"', '--out', str(tmp_path)])
    assert code == EXIT_USAGE


def test_missing_config_file_is_usage_error(tmp_path):
    code = main(['train', '--profile', 'testing', '--config', str(tmp_path / 'nope.json')])
    assert code == EXIT_USAGE


def test_unknown_subcommand_exits_with_usage():
    with pytest.raises(SystemExit) as exc:
        main(['frobnicate'])
    assert exc.value.code == EXIT_USAGE


def test_simulate_sampling_traces(tmp_path):
    code = main(['simulate-sampling', '--profile', 'testing', '--steps', '300', '--seeds', '2',
                 '--epsilon', '0.5', '--tau', '0.01',
                 '--out', str(tmp_path)])
    assert code == EXIT_OK
    rows = read_rows(tmp_path / 'sample_traces.csv')
    assert len(rows) == 300
    first = rows[0]
    assert float(first['decay_mean']) < float(first['uniform_mean'])


def test_simulate_sampling_zero_beta(tmp_path):
    code = main(['simulate-sampling', '--profile', 'testing', '--steps', '50', '--beta', '0',
                 '--out', str(tmp_path)])
    assert code == EXIT_OK
    rows = read_rows(tmp_path / 'sample_traces.csv')
    assert all(float(r['uniform_mean']) == 0.0 and float(r['decay_mean']) == 0.0 for r in rows)


def test_train_then_rebuild_heatmap(tmp_path):
    run_dir = tmp_path / 'run'
    assert main(['train', '--profile', 'testing', '--seed', '3', '--out', str(run_dir)]) == EXIT_OK
    for name in ('metrics.csv', 'losses.csv', 'events.csv', 'dormant.csv', 'heatmap.csv',
                 'sample_counts.csv', 'config.resolved.json'):
        assert (run_dir / name).exists(), name

    trained = HeatmapAccumulator.from_csv(run_dir / 'heatmap.csv', 100)
    assert trained.matrix().shape == (4, 4) and trained.support_ok()

    rebuilt = rebuild_heatmap(run_dir)
    np.testing.assert_allclose(rebuilt.matrix(), trained.matrix(), rtol=1e-9, equal_nan=True)

    out = tmp_path / 'rebuilt.csv'
    assert main(['heatmap', '--run-dir', str(run_dir), '--out', str(out)]) == EXIT_OK
    assert out.exists()


def test_rebuild_matches_subsampled_heatmap(tmp_path):
    run_dir = tmp_path / 'run'
    assert main(['train', '--profile', 'testing', '--seed', '5', '--out', str(run_dir),
                 '--set', 'diagnostics.max_per_bucket=40']) == EXIT_OK
    trained = HeatmapAccumulator.from_csv(run_dir / 'heatmap.csv', 100)
    rebuilt = rebuild_heatmap(run_dir)
    np.testing.assert_allclose(rebuilt.matrix(), trained.matrix(), rtol=1e-9, equal_nan=True)


def test_heatmap_without_checkpoints_is_usage_error(tmp_path):
    assert main(['heatmap', '--run-dir', str(tmp_path)]) == EXIT_USAGE


def test_ablate_summary(tmp_path):
    code = main(['ablate', '--profile', 'testing', '--out', str(tmp_path),
                 '--set', 'run.env_steps=200',
                 '--set', 'ablate.envs=["pendulum"]', '--set', 'ablate.seeds=[0]',
                 '--set', 'ablate.sampler_kinds=["decay"]',
                 '--set', 'ablate.variants=["on", "fixed-4"]'])
    assert code == EXIT_OK
    summary = read_rows(tmp_path / 'summary.csv')
    assert [r['variant'] for r in summary] == ['on', 'fixed-4']
    fixed = summary[1]
    assert fixed['expansions'] == '0' and fixed['aborted'] == '0'
    assert (tmp_path / 'pendulum' / 'decay' / 'fixed-4' / 'seed0' / 'metrics.csv').exists()


def _summary_row(kind, variant, seed, ret, aborted=False):
    return {'env': 'pendulum', 'sampler_kind': kind, 'variant': variant, 'seed': seed,
            'final_return_mean': ret, 'aborted': aborted}


def test_directional_check():
    summary = [_summary_row('decay', 'on', s, r) for s, r in [(0, -100), (1, -120), (2, -300)]]
    summary += [_summary_row('uniform', 'fixed-2', s, r) for s, r in [(0, -150), (1, -130), (2, -200)]]
    assert directional_check(summary) == (True, 2, 3)

    summary[0]['aborted'] = True
    assert directional_check(summary)[0] is False
    assert directional_check(summary[:3]) is None


def test_comparison_rows_pair_seeds():
    summary = [_summary_row('decay', 'on', 0, -100.0), _summary_row('uniform', 'on', 0, -150.0),
               _summary_row('decay', 'on', 1, -90.0)]
    rows = comparison_rows(summary)
    assert rows == [{'env': 'pendulum', 'variant': 'on', 'seed': 0, 'decay_return': -100.0,
                     'uniform_return': -150.0, 'decay_minus_uniform': 50.0}]


def test_plan_runs_restricted_to_cells(tmp_path):
    cfg = resolve_run_config('testing', overrides=[{'ablate': {
        'envs': ['pendulum'], 'seeds': [0, 1, 2], 'sampler_kinds': ['decay', 'uniform'],
        'variants': ['on', 'fixed-2'], 'cells': ['decay/on', 'uniform/fixed-2']}}])
    plan = plan_runs(cfg, tmp_path)
    cells = [(run.replay.kind, variant) for run, _, variant in plan]
    assert cells == [('decay', 'on')] * 3 + [('uniform', 'fixed-2')] * 3
    assert [run.run.seed for run, _, _ in plan] == [0, 1, 2] * 2
    assert plan[3][0].agent.max_depth == plan[3][0].agent.initial_depth == 2


@pytest.mark.slow
def test_acceptance_ablation_direction(tmp_path):
    code = main(['ablate', '--profile', 'desk', '--config', str(CONFIG_DIR / 'acceptance_pendulum.json'),
                 '--out', str(tmp_path)])
    assert code == EXIT_OK
    summary = [dict(row, final_return_mean=float(row['final_return_mean']),
                    aborted=row['aborted'] == '1')
               for row in read_rows(tmp_path / 'summary.csv')]
    assert len(summary) == 6 and not any(row['aborted'] for row in summary)
    passed, wins, pairs = directional_check(summary)
    assert passed, f'{wins}/{pairs} seed pairs favour decayed replay with growth'
