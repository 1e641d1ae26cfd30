"""Flags and config resolution shared by every subcommand."""
from pathlib import Path

from config import Config
from models.run_config import resolve_run_config


def add_common_flags(parser):
    parser.add_argument('--config', help='JSON run config with nested sections')
    parser.add_argument('--profile', choices=['desk', 'full', 'testing'],
                        help='settings profile (default: FOG_PROFILE or desk)')
    parser.add_argument('--seed', type=int, help='root seed (run.seed)')
    parser.add_argument('--out', help='output directory (run.out_dir)')
    parser.add_argument('--set', dest='overrides', action='append', default=[],
                        metavar='SECTION.KEY=VALUE', help='override one config value')
    return parser


def resolve_from_args(args, *extra_trees):
    """RunConfig from profile, --config, --set, extra trees, then --seed/--out."""
    flags = {}
    if args.seed is not None:
        flags['seed'] = args.seed
    if args.out:
        flags['out_dir'] = args.out
    overrides = list(args.overrides) + list(extra_trees)
    if flags:
        overrides.append({'run': flags})
    return resolve_run_config(args.profile, args.config, overrides)


def output_dir(run_config, default_name) -> Path:
    if run_config.run.out_dir:
        return Path(run_config.run.out_dir)
    return Path(Config.OUTPUT_ROOT) / default_name
