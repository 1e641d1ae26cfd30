#!/usr/bin/env python3
"""Print (or save) the fully resolved run config of a profile."""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from models.run_config import resolve_run_config  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument('--profile', default=None, help='desk, full or testing')
    parser.add_argument('--config', default=None, help='JSON config to layer on top')
    parser.add_argument('--save', default=None, help='write the JSON here instead of stdout')
    args = parser.parse_args()

    resolved = resolve_run_config(args.profile, args.config)
    text = json.dumps(resolved.to_dict(), indent=2, sort_keys=True)
    if args.save:
        Path(args.save).write_text(text)
        print(f'✅ Saved {resolved.profile} config to {args.save}')
    else:
        print(text)


if __name__ == '__main__':
    main()
