"""focktomo command line: simulate, reconstruct, report, selftest.

Errors print a single line ``error: <kind>: <message>`` to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import sys

from . import experiment
from .config import METHODS, ConfigError, load_config
from .io import FileFormatError
from .tomography import ReconstructionError

# CLI flag -> RunConfig field
_OVERRIDES = {
    "seed": "seed", "out": "out", "method": "method",
    "g": "g", "gamma": "gamma", "xi": "xi", "eta": "eta", "e": "e", "mu": "mu",
    "n0_count": "n0_count", "n1_count": "n1_count", "n2_count": "n2_count", "phases": "phases",
}

EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_RECON = 4
EXIT_IO = 5


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--method", choices=METHODS)
    for name in ("g", "gamma", "xi", "eta", "e", "mu"):
        common.add_argument(f"--{name}", type=float)
    for ch in (0, 1, 2):
        common.add_argument(f"--n{ch}-count", dest=f"n{ch}_count", type=int)
    common.add_argument("--phases", type=int, metavar="K")

    parser = argparse.ArgumentParser(prog="focktomo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="draw homodyne records for every channel")
    sub.add_parser("reconstruct", parents=[common], help="reconstruct the conditioned states")
    sub.add_parser("report", parents=[common], help="write the critical-value report")
    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.add_argument("--quick", action="store_true", help="skip the end-to-end criteria")
    return parser


def _config(args):
    overrides = {field: getattr(args, flag) for flag, field in _OVERRIDES.items()}
    return load_config(args.config, overrides)


def _fail(kind: str, message: str, code: int) -> int:
    print(f"error: {kind}: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            from .acceptance import run_all
            results = run_all(quick=args.quick)
            for r in results:
                print(r.line())
            return 0 if all(r.passed for r in results) else 1
        cfg = _config(args)
        if args.command == "simulate":
            paths = experiment.simulate(cfg)
            for ch in sorted(paths):
                print(paths[ch])
        elif args.command == "reconstruct":
            experiment.reconstruct(cfg)
            print(cfg.out_dir / "reconstruct_summary.txt")
        elif args.command == "report":
            experiment.report(cfg)
            print(cfg.out_dir / "report.txt")
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except FileFormatError as exc:
        return _fail("format", exc, EXIT_INPUT)
    except FileNotFoundError as exc:
        return _fail("missing", exc, EXIT_INPUT)
    except ReconstructionError as exc:
        return _fail("reconstruction", exc, EXIT_RECON)
    except OSError as exc:
        return _fail("io", exc, EXIT_IO)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
