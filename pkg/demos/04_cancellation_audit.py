"""
Auditing a handle cancellation
==============================

The bundled script starts from a <1,0>-chain next to a dotted-circle /
0-framed Hopf pair, slides, slam-dunks and cancels until nothing is left.
Every step is replayed and checked.
"""

from importlib import resources
from pathlib import Path

from kirbycalc import parse_script, replay

root = Path(str(resources.files("kirbycalc") / "corpus"))
script = parse_script((root / "cancellation-demo.ks").read_text(), base_dir=str(root))
report = replay(script)
for line in report.lines():
    print(line)
