import json
from pathlib import Path

from rcp_dynamics.exceptions import ParameterError


def parse_range(text: str) -> tuple[float, float, int]:
    """Parses 'lo:hi:n' into (lo, hi, n) with lo < hi and n >= 2."""
    parts = str(text).split(':')
    if len(parts) != 3:
        raise ParameterError(f"range must look like 'lo:hi:n', got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ParameterError(f'malformed range {text!r}')
    if not lo < hi or n < 2:
        raise ParameterError(f'range needs lo < hi and n >= 2, got {text!r}')
    return lo, hi, n


def parse_assignment(text: str, name: str = 'a') -> float:
    """Parses 'a=<value>'."""
    key, sep, value = str(text).partition('=')
    if not sep or key.strip() != name:
        raise ParameterError(f"expected '{name}=<value>', got {text!r}")
    try:
        return float(value)
    except ValueError:
        raise ParameterError(f'malformed value in {text!r}')


def load_config(path) -> dict:
    """Reads a JSON object of option values; keys may use '-' or '_'."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, ValueError) as error:
        raise ParameterError(f'cannot read config {path}: {error}')
    if not isinstance(payload, dict):
        raise ParameterError(f'config {path} must hold a JSON object')
    return {key.replace('-', '_'): value for key, value in payload.items()}


def merge_options(options: dict, config: dict, defaults: dict) -> dict:
    """Explicit options win over the config file, which wins over defaults."""
    merged = dict(defaults)
    merged.update({key: value for key, value in config.items() if value is not None})
    merged.update({key: value for key, value in options.items() if value is not None})
    return merged
