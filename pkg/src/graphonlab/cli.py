"""Command line entry point: ``graphonlab list`` and ``graphonlab run CONFIG``.

Exit codes: 0 on success, 2 on invalid config or parameters, 1 on any
other runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

from .scenarios import ScenarioError, run_scenario, scenarios

log = logging.getLogger("graphonlab")

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


def default_config(name: str) -> dict:
    if name not in scenarios():
        raise ScenarioError(f"unknown scenario {name!r}")
    text = resources.files("graphonlab").joinpath("configs", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_config(target: str) -> dict:
    """Read a config file, or the bundled default when ``target`` names a scenario."""
    path = Path(target)
    if path.is_file():
        try:
            cfg = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
    elif target in scenarios():
        cfg = default_config(target)
    else:
        raise ScenarioError(f"{target}: no such config file or scenario")
    if not isinstance(cfg, dict) or "scenario" not in cfg:
        raise ScenarioError("config must be a JSON object with a 'scenario' key")
    return cfg


def run(target: str, out_dir: str | None = None, seed: int | None = None) -> int:
    try:
        cfg = load_config(target)
        out = Path(out_dir or cfg.get("out_dir") or f"out/{cfg['scenario']}")
        s = seed if seed is not None else int(cfg.get("seed", 0))
        summary = run_scenario(cfg["scenario"], cfg.get("params", {}), s, out)
    except (ScenarioError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        log.exception("scenario failed")
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(json.dumps({"scenario": cfg["scenario"], "out_dir": str(out), "files": summary.get("files", [])}))
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="graphonlab", description="Graph-limit experiment runner")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list scenario names")
    p_run = sub.add_parser("run", help="run a scenario from a JSON config (or a bundled scenario name)")
    p_run.add_argument("config")
    p_run.add_argument("--out-dir")
    p_run.add_argument("--seed", type=int)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list":
        for name in scenarios():
            print(name)
        return EXIT_OK
    return run(args.config, args.out_dir, args.seed)


if __name__ == "__main__":
    sys.exit(main())
