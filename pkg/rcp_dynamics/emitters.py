import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from django.utils import timezone

from rcp_dynamics.logger import logger

MANIFEST_SUFFIX = '.manifest.json'


def format_value(value) -> str:
    """17 significant digits for floats, empty cell for a missing value."""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return 'nan' if math.isnan(value) else f'{value:.17g}'
    return str(value)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    return str(path)


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline='') as stream:
        reader = csv.reader(stream)
        header = next(reader)
        return header, [row for row in reader]


def write_json(path, payload) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + '\n')
    return str(path)


def companion_path(out, suffix: str) -> str:
    return f'{out}{suffix}'


@dataclass
class RunManifest:
    command: str
    config: dict
    tool_version: str
    artifact_paths: list[str] = field(default_factory=list)
    timestamp: str = ''
    status: str = 'ok'
    failure_time: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


class Emission(object):
    """
    Implements pattern Command: every writer runs in order and returns the path it
    produced; the manifest is written last and lists every file, itself included.
    A failing writer stops the data files but the manifest is still written with
    status 'failed'.
    """
    def __init__(self, manifest: RunManifest, out, commands: list[Callable[[], str]] | None = None):
        self._commands = commands or []
        self.manifest = manifest
        self.manifest_path = companion_path(out, MANIFEST_SUFFIX)

    @property
    def commands(self):
        return self._commands

    def add(self, command: Callable[[], str]) -> None:
        self._commands.append(command)

    def execute(self) -> list[str]:
        try:
            for command in self._commands:
                name = getattr(command, '__name__', type(command).__name__)
                path = command()
                logger.info(f'{self.manifest.command} wrote {path} ({name})')
                self.manifest.artifact_paths.append(path)
        except Exception as error:
            logger.error(f'{self.manifest.command} failed writing artifacts: {error}')
            self.manifest.status = 'failed'
            raise
        finally:
            self.manifest.timestamp = timezone.now().isoformat()
            self.manifest.artifact_paths.append(self.manifest_path)
            write_json(self.manifest_path, self.manifest.as_dict())
        return self.manifest.artifact_paths
