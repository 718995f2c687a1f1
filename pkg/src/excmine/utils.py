import hashlib
import json
import os
import tempfile
import traceback
from functools import wraps

from excmine import __version__, logger


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def atomic_write(path: str, text: str):
    """Write `text` to `path` through a temp file in the same directory and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=".excmine-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.info(f"Wrote {path}")


def write_run_metadata(output_path: str, command: str, config: dict, inputs: dict, seed=None, extra=None):
    """Write `<output>.meta.json` next to an output file. No timestamps, so reruns are byte-identical."""
    meta = {
        "command": command,
        "version": __version__,
        "seed": seed,
        "config": config,
        "inputs": {name: sha256_file(p) for name, p in sorted(inputs.items()) if p is not None},
        "output": sha256_file(output_path),
    }
    if extra:
        meta.update(extra)
    atomic_write(f"{output_path}.meta.json", json.dumps(meta, indent=4, sort_keys=True) + "\n")
    return meta


def monitor(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except Exception:
            logger.error(f"{func.__name__} has failed due to an exception:")
            logger.error(traceback.format_exc())
            raise

    return wrapper
