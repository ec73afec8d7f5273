from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from kirbycalc.diagram import parse_diagram

BUNDLED = Path(str(resources.files("kirbycalc") / "corpus"))


def bundled(name: str):
    return parse_diagram((BUNDLED / f"{name}.kd").read_text())


def external(name: str) -> Path | None:
    root = os.environ.get("KIRBYCALC_CORPUS")
    if not root:
        return None
    p = Path(root) / name
    return p if p.exists() else None
