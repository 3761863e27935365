"""Canonical JSON encoding shared by every persisted artifact.

All workspace files are written through canonical_dumps so that
byte-level golden tests and directory-hash comparisons stay stable:
sorted keys, two-space indent, LF line endings, trailing newline.
"""

import json
from pathlib import Path


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def canonical_bytes(obj) -> bytes:
    return canonical_dumps(obj).encode("utf-8")


def write_canonical(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(canonical_bytes(obj))


def read_json(path: Path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
