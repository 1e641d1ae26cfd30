"""Models package for the Forget-and-Grow lab"""
from .records import GrowthEvent, LossRecord, SamplingCountStats
from .run_config import RunConfig, resolve_run_config
from .transition import Batch, BufferSchema, Transition

__all__ = ['Batch', 'BufferSchema', 'GrowthEvent', 'LossRecord', 'RunConfig',
           'SamplingCountStats', 'Transition', 'resolve_run_config']
