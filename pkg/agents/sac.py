"""Twin-critic soft actor-critic with automatic temperature.

Critic target:  y = r + gamma (1 - done) (min(Q1', Q2')(s', a') - alpha log pi(a'|s'))
Critic loss:    mean over the batch of w (Q_k(s, a) - y)^2 for k = 1, 2
Actor loss:     mean(alpha log pi(a|s) - min(Q1, Q2)(s, a)),  a = tanh(mu + sigma xi)
Temperature:    -log_alpha * mean(log pi + target_entropy), log_alpha stepped by Adam
"""
import logging
import math
from dataclasses import asdict

import numpy as np

from models.records import LossRecord
from models.run_config import AgentSection
from networks import (Adam, GaussianActor, ResidualCritic, ScalarParameter, load_checkpoint,
                      save_checkpoint)
from utils.errors import NonFiniteError, SchemaError

logger = logging.getLogger(__name__)


class SACAgent:
    """Actor, twin critics, their targets, and the three optimizers.

    Attributes:
        updates: gradient updates since construction
        updates_since_reset: gradient updates since the last reset (drives expansion)
        last_td_errors: first-critic TD errors of the latest update (PER feedback)
    """

    def __init__(self, state_dim, action_dim, cfg: AgentSection, rng: np.random.Generator,
                 lr_layer_count='head_and_blocks'):
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.cfg = cfg
        self.rng = rng
        self.lr_layer_count = lr_layer_count
        self.target_entropy = (float(cfg.target_entropy) if cfg.target_entropy is not None
                               else -float(action_dim))
        self.updates = 0
        self.updates_since_reset = 0
        self.last_td_errors = None
        self.build(rng)

    # -- construction ---------------------------------------------------------

    def _new_critic(self, rng):
        return ResidualCritic(self.state_dim, self.action_dim, self.cfg.hidden_dim,
                              self.cfg.initial_depth, self.cfg.max_depth, rng)

    def _new_actor(self, rng):
        return GaussianActor(self.state_dim, self.action_dim, self.cfg.actor_hidden_dim, rng,
                             layer_norm=self.cfg.actor_layer_norm)

    def build(self, rng, critics_only=False):
        """(Re)initialize networks, targets, optimizers and temperature."""
        if not critics_only:
            self.actor = self._new_actor(rng)
            self.actor_optim = Adam(self.actor, lr=self.cfg.actor_lr)
        self.critics = [self._new_critic(rng), self._new_critic(rng)]
        self.targets = [critic.clone() for critic in self.critics]
        self.critic_optims = [Adam(critic, lr=self.cfg.critic_lr,
                                   weight_decay=self.cfg.critic_weight_decay)
                              for critic in self.critics]
        self.log_alpha = ScalarParameter(math.log(self.cfg.init_alpha))
        self.alpha_optim = Adam(self.log_alpha, lr=self.cfg.alpha_lr)
        self.updates_since_reset = 0

    @property
    def alpha(self) -> float:
        return math.exp(self.log_alpha.value)

    @property
    def depth(self) -> int:
        return self.critics[0].depth

    @property
    def critic_lr(self) -> float:
        return self.critic_optims[0].lr

    def dense_layer_count(self) -> int:
        return self.critics[0].dense_layer_count(include_head=self.lr_layer_count == 'head_and_blocks')

    def initial_dense_layer_count(self) -> int:
        head = 1 if self.lr_layer_count == 'head_and_blocks' else 0
        return head + 2 * self.cfg.initial_depth

    # -- acting ---------------------------------------------------------------

    def act(self, state, deterministic=False, rng=None):
        """One action in (-1, 1)^A for a single state."""
        state = np.asarray(state, dtype=np.float64).reshape(1, -1)
        if state.shape[1] != self.state_dim:
            raise SchemaError(f'state dim {state.shape[1]} != {self.state_dim}')
        if not np.all(np.isfinite(state)):
            raise NonFiniteError('non-finite state passed to act()')
        action, *_ = self.actor.sample(state, rng or self.rng, deterministic=deterministic)
        self.actor.invalidate()
        return action[0]

    # -- learning -------------------------------------------------------------

    def td_targets(self, batch, rng=None):
        """Bootstrapped targets under the target critics and current policy."""
        next_actions, next_log_prob, *_ = self.actor.sample(batch.next_states, rng or self.rng)
        self.actor.invalidate()
        next_q = np.minimum(self.targets[0].forward(batch.next_states, next_actions),
                            self.targets[1].forward(batch.next_states, next_actions))
        for target in self.targets:
            target.invalidate()
        soft_value = next_q - self.alpha * next_log_prob
        return batch.rewards + self.cfg.gamma * (1.0 - batch.dones) * soft_value

    def critic_losses(self, batch, targets):
        """Forward + backward of both critics; returns (losses, q-values)."""
        n = len(batch)
        losses, qs = [], []
        for critic in self.critics:
            q = critic.forward(batch.states, batch.actions)
            diff = q - targets
            losses.append(float(np.mean(batch.weights * diff ** 2)))
            qs.append(q)
            critic.backward(2.0 * batch.weights * diff / n)
        return losses, qs

    def actor_loss(self, states, noise=None, rng=None):
        """Actor loss with gradients left in the actor's layers.

        Returns (loss, log_prob). Critic layer grads are clobbered on the way.
        """
        n = states.shape[0]
        alpha = self.alpha
        action, log_prob, _, std, noise = self.actor.sample(states, rng or self.rng, noise=noise)
        q1 = self.critics[0].forward(states, action)
        q2 = self.critics[1].forward(states, action)
        pick_first = (q1 <= q2).astype(np.float64)
        _, da1 = self.critics[0].backward(pick_first)
        _, da2 = self.critics[1].backward(1.0 - pick_first)
        grad_q = da1 + da2

        squash = 1.0 - action ** 2
        d_mean = (alpha * 2.0 * action - grad_q * squash) / n
        d_log_std = (alpha * (-1.0 + 2.0 * action * std * noise)
                     - grad_q * squash * std * noise) / n
        self.actor.backward(d_mean, d_log_std)
        loss = float(np.mean(alpha * log_prob - np.minimum(q1, q2)))
        return loss, log_prob

    def update(self, batch, step=None) -> LossRecord:
        """One gradient step on critics, actor and temperature."""
        targets = self.td_targets(batch)
        if not np.all(np.isfinite(targets)):
            raise NonFiniteError('non-finite TD target')

        losses, (q1, q2) = self.critic_losses(batch, targets)
        if not all(math.isfinite(loss) for loss in losses):
            raise NonFiniteError(f'critic loss exploded: {losses}')
        self.last_td_errors = q1 - targets
        for optim in self.critic_optims:
            optim.step()

        actor_loss, log_prob = self.actor_loss(batch.states)
        if not math.isfinite(actor_loss):
            raise NonFiniteError(f'actor loss exploded: {actor_loss}')
        self.actor_optim.step()
        for critic in self.critics:
            critic.invalidate()

        mean_log_prob = float(np.mean(log_prob))
        self.log_alpha.set_grad(-(mean_log_prob + self.target_entropy))
        self.alpha_optim.step()

        for target, critic in zip(self.targets, self.critics):
            target.soft_update_from(critic, self.cfg.target_update)

        self.updates += 1
        self.updates_since_reset += 1
        record = LossRecord(
            step=self.updates if step is None else int(step),
            critic_loss=0.5 * (losses[0] + losses[1]),
            actor_loss=actor_loss,
            alpha=self.alpha,
            entropy=-mean_log_prob,
            q1_mean=float(np.mean(q1)),
            q2_mean=float(np.mean(q2)),
        )
        if not record.is_finite():
            raise NonFiniteError(f'non-finite loss record {record}')
        return record

    # -- growth hooks ---------------------------------------------------------

    def expand_critics(self, rng, blocks, lr):
        """Append blocks to both critics, mirror them into the targets, rebuild optimizers."""
        for critic, target in zip(self.critics, self.targets):
            new_blocks = critic.expand(rng, blocks)
            target.blocks.extend(block.clone() for block in new_blocks)
            target.invalidate()
        for optim in self.critic_optims:
            optim.reset(lr=lr)

    def reset(self, rng):
        """Full reinit of networks, optimizers and temperature; the buffer is not ours."""
        self.build(rng, critics_only=not self.cfg.reset_actor)
        if not self.cfg.reset_actor:
            self.actor_optim.reset()

    # -- persistence ----------------------------------------------------------

    def state_tensors(self):
        tensors = {}
        for prefix, module in [('actor', self.actor), ('critic1', self.critics[0]),
                               ('critic2', self.critics[1]), ('target1', self.targets[0]),
                               ('target2', self.targets[1])]:
            for name, value in module.parameters():
                tensors[f'{prefix}.{name}'] = value
        tensors['log_alpha'] = np.array([self.log_alpha.value])
        return tensors

    def save(self, path, step=0, seed=0):
        meta = {
            'state_dim': self.state_dim,
            'action_dim': self.action_dim,
            'depth': self.depth,
            'seed': int(seed),
            'step': int(step),
            'updates': self.updates,
            'updates_since_reset': self.updates_since_reset,
            'critic_lr': self.critic_lr,
            'lr_layer_count': self.lr_layer_count,
            'agent': asdict(self.cfg),
            'critic_schema': self.critics[0].layer_schema(),
            'actor_schema': self.actor.layer_schema(),
        }
        return save_checkpoint(path, self.state_tensors(), meta)

    @classmethod
    def load(cls, path, rng=None):
        """Rebuild an agent (depth, counters, parameters) from a checkpoint."""
        tensors, meta = load_checkpoint(path)
        rng = rng or np.random.default_rng(meta['seed'])
        agent = cls(meta['state_dim'], meta['action_dim'], AgentSection(**meta['agent']), rng,
                    lr_layer_count=meta['lr_layer_count'])
        grow = meta['depth'] - agent.depth
        if grow > 0:
            agent.expand_critics(rng, grow, meta['critic_lr'])
        for prefix, module in [('actor', agent.actor), ('critic1', agent.critics[0]),
                               ('critic2', agent.critics[1]), ('target1', agent.targets[0]),
                               ('target2', agent.targets[1])]:
            cut = len(prefix) + 1
            module.load_state_dict({name[cut:]: value for name, value in tensors.items()
                                    if name.startswith(prefix + '.')})
        agent.log_alpha.value = float(tensors['log_alpha'][0])
        for optim in agent.critic_optims:
            optim.reset(lr=meta['critic_lr'])
        agent.updates = meta['updates']
        agent.updates_since_reset = meta['updates_since_reset']
        return agent, meta
