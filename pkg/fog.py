#!/usr/bin/env python3
"""
Forget-and-Grow lab command line.

Subcommands:
    verify-theorems     sample-count bounds, analytic and Monte Carlo
    simulate-sampling   uniform vs decayed per-transition sample counts
    train               one FoG-SAC run with full diagnostics
    ablate              sampler kind x expansion variant x env x seed
    heatmap             rebuild heatmap.csv from a run's checkpoints

Exit codes: 0 success, 1 verification/acceptance failure, 2 usage error.
"""
import argparse
import sys

from commands import register_all
from config import get_profile
from utils.logging_setup import configure_logging


def build_parser():
    parser = argparse.ArgumentParser(prog='fog', description=__doc__.split('\n\n')[0].strip(),
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest='command', required=True)
    register_all(subparsers)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    profile = get_profile(getattr(args, 'profile', None))
    configure_logging(profile.LOG_DIR, profile.LOG_LEVEL, debug=profile.DEBUG or profile.TESTING)
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
