import json
import sys
from typing import Any, Optional


def dump_json(data: Any) -> str:
    """Deterministic JSON text: fixed indent, keys in insertion order, trailing newline."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_output(text: str, path: Optional[str] = None):
    """Write to ``path``, or to standard output when ``path`` is None or "-"."""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w") as f:
        f.write(text)
