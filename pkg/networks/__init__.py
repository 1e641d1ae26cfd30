"""numpy network stack: layers, critic, actor, optimizer, checkpoints"""
from .actor import LOG_STD_MAX, LOG_STD_MIN, GaussianActor, log_one_minus_tanh_sq
from .checkpoint import load_checkpoint, save_checkpoint
from .critic import ResidualBlock, ResidualCritic, block_param_count
from .dormant import dormant_ratio, layer_dormant_counts
from .init import orthogonal_init
from .layers import ELU, Dense, LayerNorm
from .module import Module
from .optim import Adam, ScalarParameter

__all__ = ['Adam', 'Dense', 'ELU', 'GaussianActor', 'LOG_STD_MAX', 'LOG_STD_MIN', 'LayerNorm',
           'Module', 'ResidualBlock', 'ResidualCritic', 'ScalarParameter', 'block_param_count',
           'dormant_ratio', 'layer_dormant_counts', 'load_checkpoint', 'log_one_minus_tanh_sq',
           'orthogonal_init', 'save_checkpoint']
