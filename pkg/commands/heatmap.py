"""heatmap: rebuild heatmap.csv from a finished run's checkpoints.

Needs ``checkpoints/agent_*.ckpt`` and ``checkpoints/buffer.fogrply`` in the
run directory. The buffer at checkpoint step s is taken to be the snapshot's
transitions with insert_index < s, which is exact whenever the replay
capacity covered the whole run.
"""
import json
import logging
from pathlib import Path

import numpy as np

from agents import SACAgent
from diagnostics import HeatmapAccumulator, critic_buffer_loss
from models.run_config import DiagnosticsSection
from replay import UniformSampler
from replay.snapshot import read_snapshot, restore_into
from utils.decorators import exit_codes
from utils.errors import ConfigError
from utils.seeding import child_rng

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('heatmap', help='post-process a checkpointed run')
    parser.add_argument('--run-dir', required=True, help='directory written by train')
    parser.add_argument('--bucket-size', type=int, help='defaults to the run config value')
    parser.add_argument('--out', help='output CSV (default <run-dir>/heatmap.csv)')
    parser.set_defaults(handler=cmd_heatmap)
    return parser


def rebuild_heatmap(run_dir, bucket_size=None, max_per_bucket=None):
    run_dir = Path(run_dir)
    resolved = run_dir / 'config.resolved.json'
    if not resolved.exists():
        raise ConfigError(f'{run_dir} has no config.resolved.json')
    diag = DiagnosticsSection(**json.loads(resolved.read_text())['diagnostics'])
    bucket_size = bucket_size or diag.bucket_size
    max_per_bucket = max_per_bucket or diag.max_per_bucket

    ckpt_dir = run_dir / 'checkpoints'
    snapshot = ckpt_dir / 'buffer.fogrply'
    checkpoints = sorted(ckpt_dir.glob('agent_[0-9]*.ckpt'))
    if not snapshot.exists() or not checkpoints:
        raise ConfigError(f'{ckpt_dir} needs buffer.fogrply and agent_<step>.ckpt files')

    schema, columns = read_snapshot(snapshot)
    sampler = UniformSampler(max(1, columns['insert_index'].shape[0]), schema)
    restore_into(sampler, columns)

    acc = HeatmapAccumulator(bucket_size)
    for path in checkpoints:
        agent, meta = SACAgent.load(path)
        step = meta['step']
        frozen = np.random.default_rng(step)
        acc.add(step, critic_buffer_loss(
            agent.critics[0], lambda b: agent.td_targets(b, rng=frozen), sampler.storage,
            bucket_size, max_per_bucket, child_rng(meta['seed'], 'heatmap', step), upto=step))
        logger.info('heatmap row for step %d from %s', step, path.name)
    return acc


@exit_codes
def cmd_heatmap(args):
    print(f"📥 Loading checkpoints from {args.run_dir}")
    acc = rebuild_heatmap(args.run_dir, args.bucket_size)
    out = Path(args.out) if args.out else Path(args.run_dir) / 'heatmap.csv'
    acc.to_csv(out)
    print(f"✅ Wrote {len(acc.rows)} x {acc.n_buckets} heatmap to {out}")
    return acc.support_ok()
