"""Critic growth: expansion schedule, reset list, learning-rate decay"""
from .controller import GrowthController
from .schedule import ExpansionSchedule, ResetList, decayed_lr, should_expand

__all__ = ['ExpansionSchedule', 'GrowthController', 'ResetList', 'decayed_lr', 'should_expand']
