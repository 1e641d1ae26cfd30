"""ablate: {sampler kind} x {expansion variant} x envs x seeds.

Writes summary.csv (one row per run) and comparison.csv (decay vs uniform
final returns per env/variant/seed). When both sampler kinds ran, the
directional check compares decayed replay with expansion ('decay'/'on')
against uniform replay with resets only ('uniform'/'fixed-2'): the former
must match or beat the latter in at least two thirds of the seed pairs and
must never abort.

ablate.cells narrows the grid to listed 'kind/variant' pairs.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from agents import train
from config import Config
from models.run_config import variant_overrides
from utils.csv_io import write_rows
from utils.decorators import exit_codes

from .common import add_common_flags, output_dir, resolve_from_args

logger = logging.getLogger(__name__)

SUMMARY_FIELDS = ['env', 'sampler_kind', 'variant', 'seed', 'env_steps', 'updates',
                  'final_return_mean', 'final_return_std', 'expansions', 'resets', 'aborted',
                  'abort_reason', 'out_dir']
COMPARISON_FIELDS = ['env', 'variant', 'seed', 'decay_return', 'uniform_return',
                     'decay_minus_uniform']


def register(subparsers):
    parser = subparsers.add_parser('ablate', help='factorial sampler x expansion-variant runs')
    add_common_flags(parser)
    parser.add_argument('--workers', type=int, default=None, help='parallel runs')
    parser.set_defaults(handler=cmd_ablate)
    return parser


def plan_runs(run_config, out_root):
    """(RunConfig, out_dir, variant) for every cell of the factorial."""
    plan = []
    ab = run_config.ablate
    cells = {tuple(str(c).split('/', 1)) for c in ab.cells}
    for env in ab.envs:
        for kind in ab.sampler_kinds:
            for variant in ab.variants:
                if cells and (kind, variant) not in cells:
                    continue
                for seed in ab.seeds:
                    cfg = run_config.with_overrides(
                        variant_overrides(variant, run_config.agent.initial_depth))
                    cfg = cfg.with_overrides({'run': {'env': env, 'seed': int(seed)},
                                              'replay': {'kind': kind}})
                    cfg.validate()
                    out = Path(out_root) / env / kind / variant / f'seed{seed}'
                    plan.append((cfg, out, variant))
    return plan


def _run_one(job):
    cfg, out, variant = job
    result = train(cfg, out)
    row = result.summary_row()
    row.update({'variant': variant, 'out_dir': str(out)})
    return row


def comparison_rows(summary):
    by_key = {(r['env'], r['variant'], r['seed'], r['sampler_kind']): r for r in summary}
    rows = []
    for (env, variant, seed, kind), row in sorted(by_key.items()):
        if kind != 'decay' or (env, variant, seed, 'uniform') not in by_key:
            continue
        decay = row['final_return_mean']
        uniform = by_key[(env, variant, seed, 'uniform')]['final_return_mean']
        rows.append({'env': env, 'variant': variant, 'seed': seed, 'decay_return': decay,
                     'uniform_return': uniform, 'decay_minus_uniform': decay - uniform})
    return rows


def directional_check(summary, env='pendulum'):
    """None when the needed runs are missing, else (passed, wins, pairs)."""
    fog = {r['seed']: r for r in summary
           if r['env'] == env and r['sampler_kind'] == 'decay' and r['variant'] == 'on'}
    base = {r['seed']: r for r in summary
            if r['env'] == env and r['sampler_kind'] == 'uniform' and r['variant'] == 'fixed-2'}
    seeds = sorted(set(fog) & set(base))
    if not seeds:
        return None
    wins = sum(1 for s in seeds
               if fog[s]['final_return_mean'] >= base[s]['final_return_mean'])
    no_abort = not any(fog[s]['aborted'] for s in seeds)
    passed = no_abort and wins >= math.ceil(2 * len(seeds) / 3)
    return passed, wins, len(seeds)


@exit_codes
def cmd_ablate(args):
    run_config = resolve_from_args(args)
    out_root = output_dir(run_config, 'ablate')
    run_config.write_resolved(out_root)
    plan = plan_runs(run_config, out_root)
    workers = args.workers or Config.WORKERS
    print(f"🏗️  Ablation: {len(plan)} runs with {workers} worker(s)")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            summary = list(pool.map(_run_one, plan))
    else:
        summary = [_run_one(job) for job in plan]

    write_rows(out_root / 'summary.csv', SUMMARY_FIELDS, summary)
    comparison = comparison_rows(summary)
    if comparison:
        write_rows(out_root / 'comparison.csv', COMPARISON_FIELDS, comparison)

    aborted = [r for r in summary if r['aborted']]
    for r in aborted:
        print(f"❌ aborted: {r['env']}/{r['sampler_kind']}/{r['variant']}/seed{r['seed']}: "
              f"{r['abort_reason']}")

    check = directional_check(summary)
    if check is None:
        print(f"✅ Wrote {len(summary)} runs to {out_root / 'summary.csv'}")
        return True
    passed, wins, pairs = check
    if passed:
        print(f"✅ Decay + expansion matched or beat uniform + resets in {wins}/{pairs} seeds")
    else:
        print(f"❌ Directional check failed: {wins}/{pairs} seed pairs favour decay + expansion")
    return passed
