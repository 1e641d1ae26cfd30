"""Training diagnostics written as CSV matrices"""
from .dormant_trace import DormantProbe, DormantRow, DormantTrace
from .heatmap import HeatmapAccumulator, critic_buffer_loss, heatmap_checkpoints
from .sample_counts import SampleCountTracker

__all__ = ['DormantProbe', 'DormantRow', 'DormantTrace', 'HeatmapAccumulator', 'SampleCountTracker',
           'critic_buffer_loss', 'heatmap_checkpoints']
