"""petalknot: petal and übercrossing diagrams of knots."""

try:
    from ._version import version as __version__
except ImportError:
    __version__ = "unknown"

__all__ = ["main", "setup_container", "configure_logging"]


def setup_container(config=None) -> None:
    """Set up dependency injection container with default implementations."""
    from .cache import FingerprintCache
    from .config_loader import get_default_config
    from .container import get_container
    from .implementations import LocalFileSystem
    from .interfaces import FileSystem, Logger
    from .petalknot_logging import DefaultLogger
    from .tablekit import KnotTable

    config = config or get_default_config()
    container = get_container()

    container.register_singleton(FileSystem, LocalFileSystem())
    container.register_lazy_singleton(Logger, DefaultLogger)
    container.register_singleton(FingerprintCache, FingerprintCache(config.invariants.cache_size))

    table_path = config.table.path

    def load_table() -> KnotTable:
        return KnotTable.load(table_path, container.get(FileSystem))

    container.register_lazy_singleton(KnotTable, load_table)


def configure_logging(verbose: bool = False) -> None:
    """Configure logging from environment variables."""
    import os

    from .petalknot_logging import DEFAULT_LEVEL
    from .petalknot_logging import configure_logging as _configure_logging

    level = "DEBUG" if verbose else os.environ.get("PETALKNOT_LOG_LEVEL", DEFAULT_LEVEL)
    log_file = os.environ.get("PETALKNOT_LOG_FILE")
    structured = os.environ.get("PETALKNOT_LOG_FORMAT", "structured") == "structured"

    _configure_logging(level, log_file, structured)


def main() -> None:
    """Entry point for the petalknot command."""
    from .cli import main as cli_main

    raise SystemExit(cli_main())
