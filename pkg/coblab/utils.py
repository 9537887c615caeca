import csv
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Sequence

from rich.console import Console
from rich.logging import RichHandler

SCHEMA_VERSION = 1


def _logger(verbose: bool = False):
    logger = logging.getLogger("coblab")

    if verbose:
        logger.setLevel(logging.DEBUG)
    else:
        logger.setLevel(logging.INFO)

    if not logger.handlers:
        handler = RichHandler(log_time_format="", console=Console(stderr=True))
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    return logger


logger = _logger()


def set_verbose(verbose: bool) -> None:
    """Switch the shared logger between INFO and DEBUG."""
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


console = Console(stderr=True)


def dump_json(data: Any) -> str:
    """
    Render JSON deterministically.

    Key order is the insertion order of the producer, floats use Python's
    shortest round-trip repr, so identical inputs give byte-identical text.
    """
    return json.dumps(data, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(path: Path, data: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(data))
    logger.debug(f"wrote {path}")
    return path


def read_json(path: str | Path) -> Any:
    path = Path(path).expanduser()
    if not path.is_file():
        raise FileNotFoundError(f"File not found: {path}")
    return json.loads(path.read_text())


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    logger.debug(f"wrote {path}")
    return path
