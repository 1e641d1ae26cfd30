"""Soft actor-critic agent and its training loop"""
from .sac import SACAgent
from .trainer import RunResult, evaluate, train

__all__ = ['RunResult', 'SACAgent', 'evaluate', 'train']
