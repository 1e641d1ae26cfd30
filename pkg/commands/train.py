"""train: one agent, one seed, full artifacts."""
from agents import train
from utils.decorators import exit_codes

from .common import add_common_flags, output_dir, resolve_from_args


def register(subparsers):
    parser = subparsers.add_parser('train', help='train one FoG-SAC agent')
    add_common_flags(parser)
    parser.set_defaults(handler=cmd_train)
    return parser


@exit_codes
def cmd_train(args):
    run_config = resolve_from_args(args)
    run = run_config.run
    out = output_dir(run_config, f'train/{run.env}_{run_config.replay.kind}_seed{run.seed}')
    result = train(run_config, out)
    return not result.aborted
