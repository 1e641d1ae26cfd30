"""CLI subcommands, each registered on the fog.py parser"""
from . import ablate, heatmap, sampling, theorems, train

SUBCOMMANDS = [theorems, sampling, train, ablate, heatmap]


def register_all(subparsers):
    for module in SUBCOMMANDS:
        module.register(subparsers)
