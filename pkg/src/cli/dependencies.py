import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Type

from src.cli.dto import RunConfig, load_run_config
from src.common.exceptions import InvalidArgument
from src.core.logger import logger
from src.core.settings import Settings, load_settings
from src.core.workers import workers_count
from src.database.core.connection import JsonLinesDatabase
from src.database.repositories import BaseRepository, BracketRepository, OrbitRepository, ScanRepository
from src.database.repositories.base import TypeModel
from src.geometry import build_system
from src.services import ManeService, OrbitService, ReportService, RunContext, ScanService, Service
from src.services.base import TypeRepo


def build_service(
    service: Type[Service[TypeRepo]],
    repo: Type[BaseRepository[TypeModel]],
    db: JsonLinesDatabase,
    config_hash: str = "",
) -> Service[TypeRepo]:
    return service(repo(db, config_hash))


@dataclass(frozen=True)
class Dependencies:
    """Everything a command handler needs, built once per invocation."""

    settings: Settings
    database: JsonLinesDatabase
    out_dir: Path
    context: Optional[RunContext] = None

    @property
    def config_hash(self) -> str:
        return self.context.config_hash if self.context else ""

    def require_context(self) -> RunContext:
        if self.context is None:
            raise InvalidArgument("this command needs --config")
        return self.context

    def orbit_service(self) -> OrbitService:
        return build_service(OrbitService, OrbitRepository, self.database, self.config_hash)

    def mane_service(self) -> ManeService:
        return build_service(ManeService, BracketRepository, self.database, self.config_hash)

    def scan_service(self) -> ScanService:
        return build_service(ScanService, ScanRepository, self.database, self.config_hash)

    def report_service(self) -> ReportService:
        return ReportService(
            OrbitRepository(self.database),
            BracketRepository(self.database),
            ScanRepository(self.database),
        )


def _resolve_out_dir(args: argparse.Namespace, config: Optional[RunConfig], settings: Settings) -> Path:
    if args.out is not None:
        return Path(args.out)
    if config is not None and config.output.dir is not None:
        return config.output.dir
    return Path(settings.storage.dir)


def setup_dependencies(args: argparse.Namespace, settings: Optional[Settings] = None) -> Dependencies:
    """
    Resolve configuration, output paths and worker count.

    ``--out``, ``--seed`` and ``--threads`` override the run configuration,
    which in turn overrides the RESULTS_/WORKERS_ environment settings.
    """
    settings = settings or load_settings()
    config = load_run_config(args.config).with_seed(args.seed) if args.config is not None else None
    out_dir = _resolve_out_dir(args, config, settings)
    database_name = (config.output.database if config else None) or settings.storage.database
    database = JsonLinesDatabase(out_dir / database_name)

    context = None
    if config is not None:
        context = RunContext(
            config=config,
            system=build_system(config.system),
            out_dir=out_dir,
            workers=args.threads or workers_count(settings.workers),
            executor=settings.workers.executor,
        )
        logger.info(
            "system=%s config=%s seed=%d workers=%d out=%s",
            context.system.name,
            context.config_hash,
            context.seed,
            context.workers,
            out_dir,
        )
    return Dependencies(settings=settings, database=database, out_dir=out_dir, context=context)
