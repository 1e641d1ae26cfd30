"""RunConfig schema, loading and validation.

Resolution order: dataclass defaults, then the profile's SECTION_DEFAULTS,
then the JSON config file, then ``section.key=value`` overrides from the
command line. Unknown sections or keys are rejected.
"""
import json
import types
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from config import FULL_EXPANSION_ITERS, FULL_RESET_LIST, get_profile
from utils.errors import ConfigError

SAMPLER_KINDS = ('uniform', 'decay', 'per')
ENV_NAMES = ('pendulum', 'pointreach')
VARIANTS = ('on', 'off', 'fixed-2', 'fixed-4')
LR_LAYER_COUNTS = ('head_and_blocks', 'blocks')


@dataclass
class RunSection:
    env: str = 'pendulum'
    seed: int = 0
    out_dir: str = ''
    env_steps: int = 8_000
    scale: int = 10
    eval_interval: int = 1_000
    eval_episodes: int = 5
    checkpoint_interval: int = 0
    bootstrap_truncation: bool = True
    dump_trajectories: bool = False


@dataclass
class AgentSection:
    gamma: float = 0.99
    batch_size: int = 256
    replay_ratio: int = 10
    target_update: float = 0.005
    actor_lr: float = 3e-4
    critic_lr: float = 3e-4
    alpha_lr: float = 3e-4
    init_alpha: float = 1.0
    critic_weight_decay: float = 0.01
    hidden_dim: int = 512
    actor_hidden_dim: int = 256
    initial_depth: int = 2
    max_depth: int = 4
    actor_layer_norm: bool = False
    warmup_steps: int = 1_000
    reset_actor: bool = True
    target_entropy: float | None = None


@dataclass
class ReplaySection:
    kind: str = 'decay'
    capacity: int = 1_000_000
    epsilon: float = 1e-5
    tau: float = 0.1
    per_alpha: float = 0.6
    per_beta_start: float = 0.4
    per_beta_end: float = 1.0
    per_priority_floor: float = 1e-6
    rebuild_interval: int = 1 << 16


@dataclass
class GrowthSection:
    expansion: bool = True
    resets: bool = True
    expansion_iters: list = field(default_factory=lambda: list(FULL_EXPANSION_ITERS))
    blocks_per_expansion: int = 1
    reset_list: list = field(default_factory=lambda: list(FULL_RESET_LIST))
    lr_layer_count: str = 'head_and_blocks'


@dataclass
class DiagnosticsSection:
    heatmap_interval: int = 0
    bucket_size: int = 5_000
    max_per_bucket: int = 50_000
    dormant_interval: int = 0
    dormant_threshold: float = 0.025
    probe_size: int = 256
    track_sample_counts: bool = True
    save_checkpoints: bool = True


@dataclass
class TheoremsSection:
    thm1_horizons: list = field(default_factory=lambda: [10, 100, 1000])
    thm2_epsilons: list = field(default_factory=lambda: [0.5, 0.1, 0.01, 1e-3])
    thm2_indices: list = field(default_factory=lambda: [1, 2, 10])
    harmonic_max: int = 1_000_000
    mc_beta: int = 8
    mc_seeds: int = 10
    mc_horizon: int = 2_000
    mc_decay_horizon: int = 20_000
    mc_decay_epsilon: float = 1e-3
    figure_steps: int = 100_000
    figure_epsilon: float = 1e-4
    figure_tau: float = 0.01
    figure_beta: int = 256
    figure_seeds: int = 3


@dataclass
class SamplingSection:
    steps: int = 100_000
    beta: int = 8
    epsilon: float = 1e-4
    tau: float = 0.01
    seeds: int = 3


@dataclass
class AblateSection:
    envs: list = field(default_factory=lambda: list(ENV_NAMES))
    seeds: list = field(default_factory=lambda: [0, 1, 2])
    sampler_kinds: list = field(default_factory=lambda: ['decay'])
    variants: list = field(default_factory=lambda: list(VARIANTS))
    # 'kind/variant' pairs; empty means the full kind x variant grid
    cells: list = field(default_factory=list)


SECTIONS = {
    'run': RunSection,
    'agent': AgentSection,
    'replay': ReplaySection,
    'growth': GrowthSection,
    'diagnostics': DiagnosticsSection,
    'theorems': TheoremsSection,
    'sampling': SamplingSection,
    'ablate': AblateSection,
}


@dataclass
class RunConfig:
    """Fully resolved experiment description."""

    profile: str = 'desk'
    run: RunSection = field(default_factory=RunSection)
    agent: AgentSection = field(default_factory=AgentSection)
    replay: ReplaySection = field(default_factory=ReplaySection)
    growth: GrowthSection = field(default_factory=GrowthSection)
    diagnostics: DiagnosticsSection = field(default_factory=DiagnosticsSection)
    theorems: TheoremsSection = field(default_factory=TheoremsSection)
    sampling: SamplingSection = field(default_factory=SamplingSection)
    ablate: AblateSection = field(default_factory=AblateSection)

    def scaled_reset_list(self):
        if not self.growth.resets:
            return []
        return sorted({max(1, int(s) // self.run.scale) for s in self.growth.reset_list})

    def scaled_expansion_iters(self):
        if not self.growth.expansion:
            return []
        return [max(1, int(s) // self.run.scale) for s in self.growth.expansion_iters]

    def to_dict(self):
        return asdict(self)

    def write_resolved(self, out_dir):
        path = Path(out_dir) / 'config.resolved.json'
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))
        return path

    def with_overrides(self, tree):
        """Copy with a nested {section: {key: value}} tree merged in."""
        return _merge(self, tree)

    def validate(self):
        a, r, g = self.agent, self.replay, self.growth
        if not 0.0 < a.gamma < 1.0:
            raise ConfigError(f'agent.gamma must lie in (0,1), got {a.gamma}')
        if int(a.replay_ratio) != a.replay_ratio or a.replay_ratio < 1:
            raise ConfigError(f'agent.replay_ratio must be an integer >= 1, got {a.replay_ratio}')
        if a.batch_size < 1:
            raise ConfigError('agent.batch_size must be positive')
        if a.warmup_steps < a.batch_size:
            raise ConfigError('agent.warmup_steps must be >= agent.batch_size')
        if not 1 <= a.initial_depth <= a.max_depth:
            raise ConfigError('agent.initial_depth must lie in [1, max_depth]')
        if r.kind not in SAMPLER_KINDS:
            raise ConfigError(f'replay.kind must be one of {SAMPLER_KINDS}, got {r.kind!r}')
        if not 0.0 < r.epsilon < 1.0:
            raise ConfigError('replay.epsilon must lie in (0,1)')
        if not 0.0 <= r.tau <= 1.0:
            raise ConfigError('replay.tau must lie in [0,1]')
        if r.capacity < 1:
            raise ConfigError('replay.capacity must be positive')
        if self.run.env not in ENV_NAMES:
            raise ConfigError(f'run.env must be one of {ENV_NAMES}, got {self.run.env!r}')
        if self.run.scale < 1:
            raise ConfigError('run.scale must be >= 1')
        if g.lr_layer_count not in LR_LAYER_COUNTS:
            raise ConfigError(f'growth.lr_layer_count must be one of {LR_LAYER_COUNTS}')
        if list(g.expansion_iters) != sorted(set(g.expansion_iters)):
            raise ConfigError('growth.expansion_iters must be strictly increasing')
        if list(g.reset_list) != sorted(set(g.reset_list)):
            raise ConfigError('growth.reset_list must be strictly increasing')
        if g.expansion and (a.initial_depth + len(g.expansion_iters) * g.blocks_per_expansion
                            > a.max_depth):
            raise ConfigError('initial_depth + expansions * blocks_per_expansion exceeds max_depth')
        s = self.sampling
        if s.steps < 1 or s.beta < 0 or s.seeds < 1:
            raise ConfigError('sampling needs steps >= 1, beta >= 0, seeds >= 1')
        if not (0.0 < s.epsilon < 1.0 and 0.0 <= s.tau <= 1.0):
            raise ConfigError('sampling.epsilon must lie in (0,1) and sampling.tau in [0,1]')
        for kind in self.ablate.sampler_kinds:
            if kind not in SAMPLER_KINDS:
                raise ConfigError(f'ablate.sampler_kinds contains unknown kind {kind!r}')
        for variant in self.ablate.variants:
            if variant not in VARIANTS:
                raise ConfigError(f'ablate.variants contains unknown variant {variant!r}')
        for cell in self.ablate.cells:
            kind, _, variant = str(cell).partition('/')
            if kind not in SAMPLER_KINDS or variant not in VARIANTS:
                raise ConfigError(f'ablate.cells entry {cell!r} must look like kind/variant')
        return self


def variant_overrides(variant, initial_depth=2):
    """Section overrides realizing one expansion variant of the ablation."""
    if variant == 'on':
        return {'growth': {'expansion': True, 'resets': True}}
    if variant == 'off':
        return {'growth': {'expansion': False, 'resets': False},
                'agent': {'initial_depth': initial_depth}}
    if variant in ('fixed-2', 'fixed-4'):
        depth = int(variant.split('-')[1])
        return {'growth': {'expansion': False, 'resets': True},
                'agent': {'initial_depth': depth, 'max_depth': depth}}
    raise ConfigError(f'unknown variant {variant!r}')


def _coerce(name, expected, value):
    """Cast one config value to its field type or raise ConfigError."""
    if isinstance(expected, types.UnionType):
        if value is None and type(None) in expected.__args__:
            return None
        expected = next(t for t in expected.__args__ if t is not type(None))
    if expected is bool:
        if isinstance(value, bool):
            return value
    elif expected is int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
    elif expected is float:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif isinstance(value, expected):
        return value
    raise ConfigError(f'{name} must be {expected.__name__}, got {value!r}')


def _merge(run_config, tree):
    if not isinstance(tree, dict):
        raise ConfigError('config root must be an object of sections')
    updates = {}
    for section_name, values in tree.items():
        if section_name == 'profile':
            updates['profile'] = str(values)
            continue
        if section_name not in SECTIONS:
            raise ConfigError(f'unknown config section {section_name!r}')
        if not isinstance(values, dict):
            raise ConfigError(f'section {section_name!r} must be an object')
        section = getattr(run_config, section_name)
        known = {f.name for f in fields(section)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f'unknown keys in [{section_name}]: {sorted(unknown)}')
        field_types = {f.name: f.type for f in fields(section)}
        values = {key: _coerce(f"{section_name}.{key}", field_types[key], value)
                  for key, value in values.items()}
        updates[section_name] = replace(section, **values)
    return replace(run_config, **updates)


def parse_override(text):
    """'agent.replay_ratio=5' -> {'agent': {'replay_ratio': 5}}."""
    if '=' not in text or '.' not in text.split('=', 1)[0]:
        raise ConfigError(f'override must look like section.key=value, got {text!r}')
    dotted, raw = text.split('=', 1)
    section, key = dotted.split('.', 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return {section: {key: value}}


def resolve_run_config(profile=None, config_path=None, overrides=()):
    """Build and validate a RunConfig from profile, file and CLI overrides."""
    profile_cls = get_profile(profile)
    resolved = RunConfig(profile=profile_cls.NAME).with_overrides(profile_cls.SECTION_DEFAULTS)

    if config_path:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f'config file {config_path} not found')
        try:
            tree = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f'config file {config_path} is not valid JSON: {exc}') from exc
        resolved = resolved.with_overrides(tree)

    for override in overrides:
        tree = parse_override(override) if isinstance(override, str) else override
        resolved = resolved.with_overrides(tree)

    resolved.validate()
    try:
        profile_cls.init_run(resolved)
    except RuntimeError as exc:
        raise ConfigError(str(exc)) from exc
    return resolved
