"""
Atomic JSON/CSV report writing and job input reading
"""
import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from config import get_settings
from core.errors import ReportIOError, SchemaError
from .retry_utils import retry_io

logger = logging.getLogger(__name__)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text(path: os.PathLike, text: str, attempts: Optional[int] = None) -> Path:
    """Write text atomically (temp file + os.replace), retrying transient errors"""
    path = Path(path)
    attempts = get_settings().report_retries if attempts is None else attempts
    try:
        retry_io(max_attempts=attempts)(_atomic_write)(path, text)
    except OSError as e:
        raise ReportIOError(f"could not write {path}: {e}", {"path": str(path)}) from e
    logger.info(f"Report written to {path}", extra={"path": str(path), "bytes": len(text)})
    return path


def dumps(payload: Dict[str, Any]) -> str:
    """Canonical JSON: sorted keys, no NaN"""
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: os.PathLike, payload: Dict[str, Any]) -> Path:
    return write_text(path, dumps(payload))


def write_csv(path: os.PathLike, rows: Sequence[Dict[str, Any]], fieldnames: Optional[List[str]] = None) -> Path:
    fieldnames = fieldnames or (list(rows[0].keys()) if rows else [])
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return write_text(path, buffer.getvalue())


def read_json(path: os.PathLike) -> Dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"could not read {path}: {e}", {"path": str(path)}) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"malformed JSON in {path}: {e}", {"path": str(path), "line": e.lineno}) from e
    if not isinstance(data, dict):
        raise SchemaError(f"{path} must contain a JSON object", {"path": str(path)})
    return data
