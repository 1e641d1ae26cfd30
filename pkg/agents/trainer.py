"""Training loop: act, push, replay-ratio updates, growth, diagnostics.

Per env step: act (uniform random during warmup), push the transition,
apply a reset if the step is on the reset list, then run ``replay_ratio``
updates once warmup is over, checking the expansion schedule after each.
Artifacts land in the run directory:

    metrics.csv          step, eval return, mean losses since last row, alpha, dormant ratio, depth
    losses.csv           one LossRecord per update
    events.csv           resets and expansions
    sample_counts.csv    insert_index, count
    dormant.csv          step, ratio, event
    heatmap.csv          checkpoint x bucket critic loss
    checkpoints/         agent checkpoints (FOGCKPT) and the final buffer snapshot
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from diagnostics import (DormantProbe, DormantTrace, HeatmapAccumulator, SampleCountTracker,
                         critic_buffer_loss, heatmap_checkpoints)
from envs import TrajectoryRecorder, make_env
from growth import GrowthController
from models.records import GrowthEvent, LossRecord
from models.transition import BufferSchema, Transition
from replay import make_sampler
from replay.snapshot import write_snapshot
from utils.csv_io import write_rows
from utils.errors import FogError
from utils.seeding import child_rng, int_seed

from .sac import SACAgent

logger = logging.getLogger(__name__)

METRIC_FIELDS = ['step', 'return_mean', 'return_std', 'critic_loss', 'actor_loss', 'alpha',
                 'entropy', 'q1_mean', 'q2_mean', 'dormant_ratio', 'depth', 'critic_lr',
                 'updates']


@dataclass
class RunResult:
    """What a finished (or aborted) run reports back to the CLI."""

    out_dir: Path
    env: str
    sampler_kind: str
    seed: int
    env_steps: int = 0
    updates: int = 0
    final_return_mean: float = float('nan')
    final_return_std: float = float('nan')
    aborted: bool = False
    abort_reason: str = ''
    events: list = field(default_factory=list)

    def summary_row(self):
        return {
            'env': self.env, 'sampler_kind': self.sampler_kind, 'seed': self.seed,
            'env_steps': self.env_steps, 'updates': self.updates,
            'final_return_mean': self.final_return_mean,
            'final_return_std': self.final_return_std,
            'expansions': sum(1 for e in self.events if e.event == 'expand'),
            'resets': sum(1 for e in self.events if e.event == 'reset'),
            'aborted': self.aborted, 'abort_reason': self.abort_reason,
        }


def evaluate(policy, env, episodes, rng):
    """(mean, std) of undiscounted returns under the deterministic policy.

    ``policy`` is an agent (its deterministic act is used) or any callable
    mapping an observation to an action.
    """
    if episodes < 1:
        raise ValueError('episodes must be >= 1')
    act = ((lambda obs: policy.act(obs, deterministic=True)) if hasattr(policy, 'act')
           else policy)
    returns = []
    for _ in range(int(episodes)):
        obs = env.reset(seed=int_seed(rng))
        total = 0.0
        while True:
            result = env.step(act(obs))
            total += result.reward
            obs = result.obs
            if result.done:
                break
        returns.append(total)
    return float(np.mean(returns)), float(np.std(returns))


def _mean_losses(records):
    if not records:
        return {}
    return {name: float(np.mean([getattr(r, name) for r in records]))
            for name in ('critic_loss', 'actor_loss', 'alpha', 'entropy', 'q1_mean', 'q2_mean')}


def train(run_config, out_dir, env=None) -> RunResult:
    """Run one agent end to end and write every artifact to ``out_dir``."""
    cfg = run_config
    run, agent_cfg, replay_cfg, diag = cfg.run, cfg.agent, cfg.replay, cfg.diagnostics
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg.write_resolved(out_dir)

    seed = run.seed
    env_rng = child_rng(seed, 'env')
    agent_rng = child_rng(seed, 'agent')
    sampler_rng = child_rng(seed, 'sampler')
    eval_rng = child_rng(seed, 'eval')
    probe_rng = child_rng(seed, 'probe')

    env = env or make_env(run.env)
    eval_env = make_env(run.env)
    schema = BufferSchema(env.obs_dim, env.action_dim)
    total_updates = agent_cfg.replay_ratio * max(0, run.env_steps - agent_cfg.warmup_steps)
    sampler = make_sampler(replay_cfg.kind, replay_cfg.capacity, schema,
                           epsilon=replay_cfg.epsilon, tau=replay_cfg.tau,
                           per_alpha=replay_cfg.per_alpha,
                           per_beta_start=replay_cfg.per_beta_start,
                           per_beta_end=replay_cfg.per_beta_end,
                           per_beta_steps=max(1, total_updates),
                           per_priority_floor=replay_cfg.per_priority_floor,
                           rebuild_interval=replay_cfg.rebuild_interval)
    agent = SACAgent(env.obs_dim, env.action_dim, agent_cfg, agent_rng,
                     lr_layer_count=cfg.growth.lr_layer_count)

    probe = DormantProbe(sampler, diag.probe_size, diag.dormant_threshold, probe_rng)
    controller = GrowthController.from_config(cfg, probe=probe if diag.dormant_interval else None)
    tracker = SampleCountTracker()
    trace = DormantTrace()
    heatmap = HeatmapAccumulator(diag.bucket_size, diag.heatmap_interval)
    heatmap_steps = set(heatmap_checkpoints(run.env_steps, diag.heatmap_interval))
    recorder = TrajectoryRecorder(env.obs_dim, env.action_dim) if run.dump_trajectories else None
    ckpt_dir = out_dir / 'checkpoints'

    result = RunResult(out_dir=out_dir, env=run.env, sampler_kind=replay_cfg.kind, seed=seed)
    loss_records = []
    since_metrics = []
    metric_rows = []
    last_dormant = None

    print(f"🏗️  Training {run.env} / {replay_cfg.kind} / seed {seed} for {run.env_steps} steps")
    obs = env.reset(seed=int_seed(env_rng))
    episode = 0
    step = 0
    try:
        for step in range(1, run.env_steps + 1):
            if step <= agent_cfg.warmup_steps:
                action = agent_rng.uniform(-1.0, 1.0, size=env.action_dim)
            else:
                action = agent.act(obs)
            outcome = env.step(action)
            done = outcome.terminated or (outcome.truncated and not run.bootstrap_truncation)
            sampler.push(Transition(state=obs, action=action, reward=outcome.reward,
                                    next_state=outcome.obs, done=done))
            if recorder:
                recorder.record(episode, env.t, obs, action, outcome)
            obs = outcome.obs
            if outcome.done:
                obs = env.reset(seed=int_seed(env_rng))
                episode += 1
            result.env_steps = step

            if controller.maybe_reset(agent, step, agent_rng) and diag.dormant_interval:
                probe.refresh()
                trace.record(step, probe.measure(agent.critics[0]), 'reset')

            if step > agent_cfg.warmup_steps and len(sampler) >= agent_cfg.batch_size:
                for _ in range(agent_cfg.replay_ratio):
                    batch = sampler.sample(agent_cfg.batch_size, sampler_rng)
                    if diag.track_sample_counts:
                        tracker.record(batch.indices)
                    record = agent.update(batch, step)
                    if replay_cfg.kind == 'per':
                        sampler.per_update_priorities(batch.indices, agent.last_td_errors)
                    loss_records.append(record)
                    since_metrics.append(record)
                    if controller.maybe_expand(agent, step, agent_rng) and controller.dormant_pairs:
                        trace.record_expansion(*controller.dormant_pairs[-1])
                result.updates = agent.updates

            if diag.dormant_interval and step % diag.dormant_interval == 0:
                probe.refresh()
                last_dormant = probe.measure(agent.critics[0])
                trace.record(step, last_dormant)

            if step in heatmap_steps:
                frozen = np.random.default_rng(step)
                heatmap.add(step, critic_buffer_loss(
                    agent.critics[0], lambda b: agent.td_targets(b, rng=frozen),
                    sampler.storage, diag.bucket_size, diag.max_per_bucket,
                    child_rng(seed, 'heatmap', step)))
                if diag.save_checkpoints:
                    agent.save(ckpt_dir / f'agent_{step:08d}.ckpt', step=step, seed=seed)
            elif run.checkpoint_interval and step % run.checkpoint_interval == 0:
                agent.save(ckpt_dir / f'agent_{step:08d}.ckpt', step=step, seed=seed)

            if run.eval_interval and (step % run.eval_interval == 0 or step == run.env_steps):
                mean, std = evaluate(agent, eval_env, run.eval_episodes, eval_rng)
                result.final_return_mean, result.final_return_std = mean, std
                row = {'step': step, 'return_mean': mean, 'return_std': std,
                       'dormant_ratio': last_dormant, 'depth': agent.depth,
                       'critic_lr': agent.critic_lr, 'updates': agent.updates}
                row.update(_mean_losses(since_metrics))
                metric_rows.append(row)
                since_metrics = []
                logger.info('step %d: return %.2f +- %.2f, depth %d', step, mean, std, agent.depth)
    except (FogError, ArithmeticError) as exc:
        result.aborted = True
        result.abort_reason = f'{type(exc).__name__}: {exc}'
        logger.warning('run aborted at step %d: %s', step, result.abort_reason)
        print(f"❌ Run aborted at step {step}: {result.abort_reason}")

    result.events = list(controller.events)
    _write_artifacts(out_dir, result, metric_rows, loss_records, trace, heatmap, tracker,
                     recorder, diag, sampler, agent, ckpt_dir, seed)
    if not result.aborted:
        print(f"✅ Finished: final return {result.final_return_mean:.2f}, "
              f"{result.updates} updates, depth {agent.depth}")
    return result


def _write_artifacts(out_dir, result, metric_rows, loss_records, trace, heatmap, tracker,
                     recorder, diag, sampler, agent, ckpt_dir, seed):
    write_rows(out_dir / 'metrics.csv', METRIC_FIELDS, metric_rows)
    write_rows(out_dir / 'losses.csv', LossRecord.fieldnames(),
               (record.as_row() for record in loss_records))
    write_rows(out_dir / 'events.csv', GrowthEvent.fieldnames(),
               (event.as_row() for event in result.events))
    if diag.dormant_interval:
        trace.to_csv(out_dir / 'dormant.csv')
    if diag.heatmap_interval:
        heatmap.to_csv(out_dir / 'heatmap.csv')
    if diag.track_sample_counts:
        tracker.to_csv(out_dir / 'sample_counts.csv', sampler.storage.next_index)
    if recorder:
        recorder.write(out_dir / 'trajectories.csv')
    if diag.save_checkpoints and not result.aborted:
        agent.save(ckpt_dir / 'agent_final.ckpt', step=result.env_steps, seed=seed)
        write_snapshot(sampler, ckpt_dir / 'buffer.fogrply')
