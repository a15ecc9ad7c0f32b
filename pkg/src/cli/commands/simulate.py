"""
Simulation Command

``smoothtest simulate CONFIG --out DIR`` runs every experiment a config file
describes and writes one results CSV per experiment plus ``manifest.json``.

Output layout:
    DIR/<name>__<method>_<basis>_d<d>_n<n>_m<m>.csv    param,rate,se,R,seed
    DIR/manifest.json                                  resolved configs

The manifest lists, for each file, the full resolved configuration (seed and
defaults included), the procedure parameters and any parameter conventions
the generators rely on. Worker count is not recorded: results do not depend
on it.

Example:
    $ smoothtest simulate configs/size_gamma.cfg --out results/size --jobs 8
"""

import argparse
from pathlib import Path

from adapters.config_file import load_config
from adapters.csv_io import write_results_csv
from cli.schemas import ExperimentEntry, SimulationManifest, to_json
from config.dependencies import procedure_for
from config.logging import logger
from config.settings import settings
from core.services.experiment_service import ExperimentService
from core.validators import require_count

COMMAND = "simulate"

# Settings that feed defaults into procedures and generators.
MANIFEST_SETTINGS = (
    "DEFAULT_D",
    "DEFAULT_BASIS",
    "SCHWARZ_D_MAX",
    "PERMUTATIONS",
    "BOOTSTRAP_B",
    "RESTARTS",
    "BOOTSTRAP_RESTARTS",
    "CANDIDATE_DIRECTIONS",
    "INITIAL_STEP",
    "SIMPLEX_TOLERANCE",
    "MAX_ITERATIONS",
    "CIRCLE_GRID",
    "CIRCLE_EXACT_LIMIT",
    "BF_DIRECTIONS",
    "AR1_RHO",
)


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(
        COMMAND,
        help="run size / power experiments from a config file",
        description="Run the Monte Carlo experiments described by a config file.",
    )
    parser.add_argument("config", help="experiment config file (key = value lines)")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes")
    parser.add_argument(
        "--replicates", type=int, default=None, help="override the replicate count R"
    )
    parser.set_defaults(handler=handle)
    return parser


def _unique_name(stem: str, used: set[str]) -> str:
    name, k = f"{stem}.csv", 2
    while name in used:
        name, k = f"{stem}_{k}.csv", k + 1
    used.add(name)
    return name


def handle(args: argparse.Namespace) -> int:
    """
    Run all experiments and write results and manifest.

    Raises:
        InputError: On config grammar errors or unknown keys
        DomainError: On invalid experiment parameters
    """
    if args.jobs is not None:
        require_count(args.jobs, "jobs")
    configs = load_config(args.config)
    if args.replicates is not None:
        require_count(args.replicates, "replicates")
        configs = [cfg.model_copy(update={"replicates": args.replicates}) for cfg in configs]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    service = ExperimentService(jobs=args.jobs)

    used: set[str] = set()
    entries = []
    for index, cfg in enumerate(configs, start=1):
        logger.info("experiment %d/%d: %s", index, len(configs), cfg.slug)
        file_name = _unique_name(cfg.slug, used)
        results = service.run(cfg)
        write_results_csv(out_dir / file_name, results)
        entries.append(ExperimentEntry.from_domain(file_name, cfg, procedure_for(cfg).describe()))
        print(out_dir / file_name)

    manifest = SimulationManifest(
        source=str(args.config),
        settings={key: getattr(settings, key) for key in MANIFEST_SETTINGS},
        experiments=entries,
    )
    (out_dir / "manifest.json").write_text(to_json(manifest), encoding="utf-8")
    return 0
