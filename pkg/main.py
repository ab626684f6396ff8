#!/usr/bin/env python3
"""
Mixed-Numerology PAPR Reduction Simulator
Main application entry point
"""

import argparse
import asyncio
import sys
from typing import List, Optional

from src.config import ExperimentConfig
from src.errors import ConfigError, MixnumError
from src.orchestrator import ExperimentOrchestrator
from src.presets import ALIASES, PRESETS, list_presets
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="PAPR reduction for mixed-numerology OFDM: ICF, NS-ICF, O-ADMM and CU-ADMM"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run a Monte-Carlo experiment")
    run.add_argument("config_path", type=str, help="Path to configuration file (.yaml or key = value)")
    run.add_argument("--out", type=str, default="results", help="Directory for result files")
    run.add_argument("--seed", type=int, help="Override the configured seed")
    run.add_argument("--preset", type=str, help="Apply a named preset below the file's own keys")
    run.add_argument("--workers", type=int, help="Number of worker processes")

    subparsers.add_parser("list-presets", help="List reproduction presets")

    validate = subparsers.add_parser("validate", help="Check a configuration file")
    validate.add_argument("config_path", type=str, help="Path to configuration file")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig.load(args.config_path, preset=getattr(args, "preset", None))
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    return config.with_overrides(**overrides) if overrides else config


async def run_command(args: argparse.Namespace) -> int:
    config = load_config(args)
    orchestrator = ExperimentOrchestrator(config)

    logger.info(f"Starting {config.method.method} run, results in {args.out}")
    try:
        result = await orchestrator.run()
        files = orchestrator.generate_report(result, output_dir=args.out)
        logger.info(f"Run complete. Summary saved to: {files['summary']}")
    finally:
        await orchestrator.shutdown()
    return EXIT_OK


async def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point"""
    args = build_parser().parse_args(argv)

    try:
        if args.command == "list-presets":
            for name in list_presets():
                overrides = PRESETS[name]
                print(f"{name:24s} method={overrides.get('method', '-')}")
            for alias in sorted(ALIASES):
                print(f"{alias:24s} alias of {ALIASES[alias]}")
            return EXIT_OK

        if args.command == "validate":
            config = load_config(args)
            print(f"OK {args.config_path} (config hash {config.config_hash()})")
            return EXIT_OK

        return await run_command(args)

    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except KeyboardInterrupt:
        logger.info("Shutting down gracefully...")
        return EXIT_RUNTIME
    except (MixnumError, OSError) as e:
        logger.error(f"Error during execution: {e}", exc_info=True)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
