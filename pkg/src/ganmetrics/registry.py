"""Experiment run directories: hyperparameter snapshots, global step, metric log.

A run directory holds three files:

* ``hparams.json`` — canonical JSON (sorted keys, shortest round-trip float
  rendering) of the flat hyperparameter map, written once at creation.
* ``metrics.jsonl`` — append-only log, one ``{"step", "name", "value",
  "kind"}`` object per line, flushed per call so a killed process loses at
  most the in-flight line.
* ``run.lock`` — advisory single-writer lock.

Resuming checks the offered hyperparameters byte-for-byte against the stored
snapshot and refuses on any difference, then restores the global step from
the last durable log line (truncating a corrupt tail).
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DiscrepancyError, RegistryError

logger = logging.getLogger(__name__)

HPARAMS_FILE = "hparams.json"
METRICS_FILE = "metrics.jsonl"
LOCK_FILE = "run.lock"

_ALLOWED_VALUE_TYPES = (str, int, float, bool)


def canonical_hparams(hparams: dict) -> str:
    """Canonical JSON text for a flat hyperparameter map (sorted keys)."""
    if not isinstance(hparams, dict):
        raise ValueError(f"hparams must be a dict, got {type(hparams).__name__}")
    for key, value in hparams.items():
        if not isinstance(key, str):
            raise ValueError(f"hparam keys must be strings, got {key!r}")
        if not isinstance(value, _ALLOWED_VALUE_TYPES):
            raise ValueError(
                f"hparam {key!r} must be a string, number, or boolean, got {type(value).__name__}"
            )
    return json.dumps(hparams, sort_keys=True, separators=(", ", ": "), ensure_ascii=True)


def _canonical_value(value) -> str:
    return json.dumps(value, ensure_ascii=True)


@dataclass
class LogEntry:
    step: int
    name: str
    value: float
    kind: str


@dataclass
class RunRecord:
    run_dir: Path
    hparams: dict
    global_step: int = 0
    metric_log: list[LogEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    _log_fh: object = field(default=None, repr=False)

    def close(self) -> None:
        if self._log_fh is not None:
            self._log_fh.close()
            self._log_fh = None
        lock = self.run_dir / LOCK_FILE
        if lock.exists():
            lock.unlink()

    def __enter__(self) -> "RunRecord":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


def _acquire_lock(run_dir: Path) -> None:
    lock_path = run_dir / LOCK_FILE
    try:
        fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        holder = lock_path.read_text(encoding="utf-8").strip()
        raise RegistryError(
            f"{run_dir}: run.lock is held (pid {holder}); only one writer per run"
        ) from None
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(f"{os.getpid()}\n")


def _open_log(run_dir: Path):
    return open(run_dir / METRICS_FILE, "a", encoding="utf-8")


def create_run(run_dir, hparams: dict) -> RunRecord:
    """Initialize a fresh run directory with an hparams snapshot and empty log."""
    run_dir = Path(run_dir)
    canonical = canonical_hparams(hparams)
    if run_dir.exists():
        entries = list(run_dir.iterdir())
        if entries:
            if (run_dir / HPARAMS_FILE).exists():
                raise RegistryError(
                    f"{run_dir}: run already exists; resume it instead of re-creating"
                )
            raise RegistryError(
                f"{run_dir}: directory is non-empty but holds no {HPARAMS_FILE} (corrupt run?)"
            )
    else:
        run_dir.mkdir(parents=True)
    _acquire_lock(run_dir)
    try:
        (run_dir / HPARAMS_FILE).write_text(canonical + "\n", encoding="utf-8")
        (run_dir / METRICS_FILE).touch()
        record = RunRecord(run_dir=run_dir, hparams=json.loads(canonical))
        record._log_fh = _open_log(run_dir)
    except Exception:
        (run_dir / LOCK_FILE).unlink(missing_ok=True)
        raise
    return record


def _load_stored_hparams(run_dir: Path) -> dict:
    path = run_dir / HPARAMS_FILE
    if not path.exists():
        raise RegistryError(f"{run_dir}: missing {HPARAMS_FILE}; not a valid run")
    try:
        stored = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RegistryError(f"{run_dir}: corrupt {HPARAMS_FILE}: {exc}") from exc
    if not isinstance(stored, dict):
        raise RegistryError(f"{run_dir}: {HPARAMS_FILE} does not hold an object")
    return stored


def _diff_hparams(stored: dict, offered: dict) -> list[str]:
    diffs = []
    for key in sorted(set(stored) | set(offered)):
        if key not in stored:
            diffs.append(f"{key}: missing from stored run, offered {_canonical_value(offered[key])}")
        elif key not in offered:
            diffs.append(f"{key}: stored {_canonical_value(stored[key])}, missing from offered")
        elif _canonical_value(stored[key]) != _canonical_value(offered[key]):
            diffs.append(
                f"{key}: {_canonical_value(stored[key])} != {_canonical_value(offered[key])}"
            )
    return diffs


def _replay_log(run_dir: Path) -> tuple[list[LogEntry], int]:
    """Parse metrics.jsonl, truncating everything from the first bad line on."""
    path = run_dir / METRICS_FILE
    if not path.exists():
        raise RegistryError(f"{run_dir}: missing {METRICS_FILE}; not a valid run")
    entries: list[LogEntry] = []
    keep_bytes = 0
    truncated = False
    with open(path, "rb") as fh:
        for raw in fh:
            try:
                obj = json.loads(raw.decode("utf-8"))
                entry = LogEntry(
                    step=int(obj["step"]), name=str(obj["name"]),
                    value=obj["value"], kind=str(obj["kind"]),
                )
            except (ValueError, KeyError, TypeError, UnicodeDecodeError):
                truncated = True
                break
            if not raw.endswith(b"\n"):
                # Final newline missing: the line may be a partial write.
                truncated = True
                break
            entries.append(entry)
            keep_bytes += len(raw)
    if truncated:
        with open(path, "r+b") as fh:
            fh.truncate(keep_bytes)
    return entries, keep_bytes if truncated else -1


def resume_run(run_dir, hparams: dict) -> RunRecord:
    """Reopen a run, refusing on any hyperparameter discrepancy."""
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise RegistryError(f"{run_dir}: no such run directory")
    stored = _load_stored_hparams(run_dir)
    offered = json.loads(canonical_hparams(hparams))
    if canonical_hparams(stored) != canonical_hparams(offered):
        diffs = _diff_hparams(stored, offered)
        raise DiscrepancyError(
            f"{run_dir}: hyperparameters differ from the stored run: " + "; ".join(diffs)
        )
    _acquire_lock(run_dir)
    try:
        entries, truncated_at = _replay_log(run_dir)
        record = RunRecord(
            run_dir=run_dir,
            hparams=stored,
            global_step=entries[-1].step if entries else 0,
            metric_log=entries,
        )
        if truncated_at >= 0:
            message = f"{METRICS_FILE} had a corrupt tail; truncated to {truncated_at} bytes"
            record.warnings.append(message)
            logger.warning("%s: %s", run_dir, message)
        record._log_fh = _open_log(run_dir)
    except Exception:
        (run_dir / LOCK_FILE).unlink(missing_ok=True)
        raise
    return record


def log_metric(run: RunRecord, step: int, name: str, value, kind: str = "scalar") -> None:
    """Append one metric line; the write is flushed before returning."""
    if step < run.global_step:
        raise RegistryError(
            f"step regression: global step is {run.global_step}, got {step}"
        )
    if run._log_fh is None:
        raise RegistryError(f"{run.run_dir}: run is closed")
    line = json.dumps(
        {"step": int(step), "name": name, "value": value, "kind": kind},
        ensure_ascii=True,
    )
    run._log_fh.write(line + "\n")
    run._log_fh.flush()
    run.global_step = int(step)
    run.metric_log.append(LogEntry(step=int(step), name=name, value=value, kind=kind))
