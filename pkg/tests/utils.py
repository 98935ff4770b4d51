import logging
from typing import Any, Dict, List, Optional


class ListHandler(logging.Handler):
    """A logging handler that collects log records into a list."""

    def __init__(self):
        super().__init__()
        self.logs: List[Dict[str, Any]] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.logs.append({
            'message': record.getMessage(),
            'level': record.levelname,
            'levelno': record.levelno,
            'logger_name': record.name,
        })

    def clear(self) -> None:
        self.logs.clear()

    def get_logs(self) -> List[Dict[str, Any]]:
        return self.logs.copy()

    def has_log(self, message_substring: str) -> bool:
        return any(message_substring in log['message'] for log in self.logs)

    def events(self, event_type: str) -> List[Dict[str, Any]]:
        """Sweep log entries whose event type (second token) matches."""
        return [log for log in self.logs if log['message'].split(' ')[1:2] == [event_type]]


_handler: Optional[ListHandler] = None


def _setup_handler() -> ListHandler:
    """Attaches one collecting handler to the sweep logger."""
    global _handler

    if _handler is None:
        sweep_logger = logging.getLogger('rcp-dynamics.sweep')
        _handler = ListHandler()
        _handler.setLevel(logging.DEBUG)
        sweep_logger.addHandler(_handler)
        sweep_logger.setLevel(logging.DEBUG)
        sweep_logger.propagate = False
    return _handler


_setup_handler()


def get_sweep_logs() -> ListHandler:
    return _handler
