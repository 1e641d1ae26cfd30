"""verify-theorems: the sample-count verification grid as a CSV."""
import argparse
import logging

from config import Config
from theory import verify_grid, write_verification
from utils.decorators import exit_codes

from .common import add_common_flags, output_dir, resolve_from_args

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('verify-theorems', help='check the sample-count bounds')
    add_common_flags(parser)
    parser.add_argument('--seeds', type=int, help='Monte Carlo seeds for every check')
    parser.add_argument('--workers', type=int, default=None, help='process-pool size for seeds')
    parser.add_argument('--skip-figure', action='store_true',
                        help='skip the long sample-count-shape simulation')
    parser.add_argument('--corrupt-sampler', action='store_true', help=argparse.SUPPRESS)
    parser.set_defaults(handler=cmd_verify_theorems)
    return parser


@exit_codes
def cmd_verify_theorems(args):
    extra = []
    if args.seeds is not None:
        extra.append({'theorems': {'mc_seeds': args.seeds, 'figure_seeds': args.seeds}})
    run_config = resolve_from_args(args, *extra)
    out = output_dir(run_config, 'verify-theorems')
    run_config.write_resolved(out)

    print("📥 Running verification grid...")
    rows = verify_grid(run_config, workers=args.workers or Config.WORKERS,
                       corrupt_sampler=args.corrupt_sampler,
                       include_figure=not args.skip_figure)
    path = write_verification(rows, out / 'verification.csv')

    failed = [row for row in rows if not row['pass']]
    if failed:
        for row in failed:
            print(f"❌ {row['theorem']} {row['params']}")
        print(f"❌ {len(failed)} of {len(rows)} checks failed; see {path}")
        return False
    print(f"✅ All {len(rows)} checks passed; wrote {path}")
    return True
