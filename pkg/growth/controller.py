"""Applies the expansion schedule and the reset list to a live agent."""
import logging

from models.records import GrowthEvent

from .schedule import ExpansionSchedule, ResetList, decayed_lr

logger = logging.getLogger(__name__)


class GrowthController:
    """Owns the schedule, the reset list and the growth event log.

    ``probe`` is an optional DormantProbe; when set, the first critic's
    dormant ratio is measured on one fresh probe batch right before and
    right after every expansion and the pair lands in ``dormant_pairs``.
    """

    def __init__(self, schedule: ExpansionSchedule, reset_list: ResetList, init_critic_lr,
                 probe=None):
        self.schedule = schedule
        self.reset_list = reset_list
        self.init_critic_lr = float(init_critic_lr)
        self.probe = probe
        self.events = []
        self.dormant_pairs = []

    @classmethod
    def from_config(cls, run_config, probe=None):
        agent_cfg = run_config.agent
        schedule = ExpansionSchedule(
            expansion_iters=run_config.scaled_expansion_iters(),
            blocks_per_expansion=run_config.growth.blocks_per_expansion,
            initial_depth=agent_cfg.initial_depth,
            max_depth=agent_cfg.max_depth,
        )
        return cls(schedule, ResetList(run_config.scaled_reset_list()), agent_cfg.critic_lr,
                   probe=probe)

    def maybe_expand(self, agent, step, rng) -> bool:
        if not self.schedule.should_expand(agent.updates_since_reset, agent.depth):
            return False
        self.expand(agent, step, rng)
        return True

    def expand(self, agent, step, rng):
        before = None
        if self.probe:
            self.probe.refresh()
            before = self.probe.measure(agent.critics[0])
        depth_before = agent.depth
        blocks = min(self.schedule.blocks_per_expansion, agent.cfg.max_depth - depth_before)
        lr = decayed_lr(self.init_critic_lr, agent.initial_dense_layer_count(),
                        agent.dense_layer_count() + 2 * blocks)
        agent.expand_critics(rng, blocks, lr)
        self._record(step, 'expand', depth_before, agent.depth, lr)
        if self.probe:
            after = self.probe.measure(agent.critics[0])
            self.dormant_pairs.append((int(step), before, after))
            logger.info('dormant ratio around expansion at step %d: %.4f -> %.4f',
                        step, before, after)

    def maybe_reset(self, agent, step, rng) -> bool:
        if step not in self.reset_list:
            return False
        self.reset(agent, step, rng)
        return True

    def reset(self, agent, step, rng):
        depth_before = agent.depth
        agent.reset(rng)
        self.schedule.rearm()
        self._record(step, 'reset', depth_before, agent.depth, agent.critic_lr)

    def _record(self, step, kind, depth_before, depth_after, lr):
        event = GrowthEvent(step=int(step), event=kind, depth_before=depth_before,
                            depth_after=depth_after, lr=lr)
        self.events.append(event)
        logger.info('%s at step %d: depth %d -> %d, critic lr %.3e',
                    kind, step, depth_before, depth_after, lr)
        return event
