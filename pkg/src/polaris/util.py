import os
import tempfile
from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np
import srsly

THREADS_ENV = "POLARIS_THREADS"


def read_json(path: Union[str, Path]) -> Any:
    """Load a JSON document using srsly."""
    return srsly.read_json(Path(path))


def dumps_json(data: Any) -> str:
    return srsly.json_dumps(data, indent=2, sort_keys=True) + "\n"


def write_text_atomic(path: Union[str, Path], text: str) -> Path:
    """Write `text` to `path` through a temp file in the same directory and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(path: Union[str, Path], data: Any) -> Path:
    """Save data as canonical JSON (sorted keys) atomically."""
    return write_text_atomic(path, dumps_json(data))


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """PCG64 generator seeded through a SeedSequence; all seeded runs go through here."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(seed: Optional[int], count: int) -> List[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def worker_count(default: int = 1) -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value
