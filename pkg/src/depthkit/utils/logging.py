import logging
from pathlib import Path
from rich.console import Console
from rich.logging import RichHandler
from typing import Optional

def setup_logging(
    level: str = "WARNING",
    log_file: Optional[Path] = None,
    verbose: bool = False
) -> None:
    """Route depthkit logging through rich, optionally mirrored to a file"""
    effective = logging.DEBUG if verbose else level.upper()
    logging.basicConfig(
        level=effective,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=verbose)],
        force=True
    )

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(
            logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        )
        logging.getLogger().addHandler(file_handler)

    logging.getLogger("depthkit").setLevel(effective)
