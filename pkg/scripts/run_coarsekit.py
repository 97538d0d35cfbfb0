# Batch entry point
# scripts/run_coarsekit.py
import argparse
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.cli.run_config import VERBS, RunConfig  # noqa: E402
from src.cli.runner import EXIT_VALIDATION, run  # noqa: E402
from src.utils.errors import ValidationError  # noqa: E402
from src.utils.helpers import parse_grid, parse_windows  # noqa: E402
from src.utils.logger import setup_logging  # noqa: E402

logger = logging.getLogger(__name__)

INPUT_ROLES = ('map', 'map2', 'space', 'cover', 'pou', 'group', 'hom')


def _argument(parse):
    """Adapt a helper parser so argparse reports its ValidationError as a usage error."""
    def convert(text):
        try:
            return parse(text)
        except ValidationError as e:
            raise argparse.ArgumentTypeError(str(e))
    return convert


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='coarsekit',
        description='Scale-response diagnostics of coarse properties on finite windows.',
    )
    parser.add_argument('command', choices=VERBS, help='diagnostic to run')
    for role in INPUT_ROLES:
        parser.add_argument(f'--{role}', help=f'{role} input: JSON path or corpus name')
    parser.add_argument('--r-grid', type=_argument(parse_grid), help='start:stop[:step] or comma list')
    parser.add_argument('--s-grid', type=_argument(parse_grid), help='start:stop[:step] or comma list')
    parser.add_argument('--w-grid', type=_argument(parse_grid), help='basepoint distances for oscillation')
    parser.add_argument('--windows', type=_argument(parse_windows), help='comma list, e.g. 16,32,64')
    parser.add_argument('--r-bound', type=float)
    parser.add_argument('--t-bound', type=float)
    parser.add_argument('-n', type=int)
    parser.add_argument('-s', type=float)
    parser.add_argument('-r', type=float)
    parser.add_argument('-R', type=float)
    parser.add_argument('-S', type=float)
    parser.add_argument('-L', type=float)
    parser.add_argument('--n-max', type=int)
    parser.add_argument('--cap', type=int)
    parser.add_argument('--output', '-o', type=Path)
    parser.add_argument('--format', choices=('csv', 'json'))
    parser.add_argument('--log-level', help='overrides COARSEKIT_LOG_LEVEL')
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Only options given on the command line override RunConfig defaults."""
    options = {
        'r_grid': args.r_grid, 's_grid': args.s_grid, 'w_grid': args.w_grid, 'windows': args.windows,
        'r_bound': args.r_bound, 't_bound': args.t_bound, 'n': args.n, 's': args.s, 'r': args.r,
        'R': args.R, 'S': args.S, 'L': args.L, 'n_max': args.n_max, 'cap': args.cap,
        'output': args.output, 'format': args.format,
    }
    inputs = {role: getattr(args, role) for role in INPUT_ROLES if getattr(args, role)}
    return RunConfig(args.command, inputs, **{k: v for k, v in options.items() if v is not None})


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage; grid parse failures land here too
        return int(e.code or 0)
    setup_logging(args.log_level)
    try:
        config = config_from_args(args)
    except ValidationError as e:
        print(f"coarsekit: invalid arguments: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
