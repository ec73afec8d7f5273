"""Move scripts: the machine form of a Kirby-calculus argument, and their replay."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from . import moves as mv
from .diagram import (
    Band,
    DiagramError,
    LinkDiagram,
    canonical_form,
    diagrams_isomorphic,
    expand_twist_boxes,
    linking_matrix,
    parse_diagram,
    writhe,
)

SCRIPT_HEADER = "kirbycalc-script v1"

KINDS = (
    "R1",
    "R2",
    "R3",
    "Slide",
    "SlamDunk",
    "BandSurgery",
    "RibbonMove",
    "CancelHopfPair",
    "ExpandTwistBox",
    "Relabel",
)


@dataclass(frozen=True)
class Move:
    kind: str
    params: tuple = ()
    direction: str = ""
    trust: str = "verified"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.trust not in ("verified", "asserted"):
            raise ValueError(f"bad trust flag {self.trust!r}")
        if isinstance(self.params, dict):
            object.__setattr__(self, "params", tuple(self.params.items()))

    @property
    def args(self) -> dict:
        return dict(self.params)

    def to_line(self) -> str:
        parts = ["step", self.kind]
        if self.direction:
            parts.append(self.direction)
        for k, v in self.params:
            if k == "diagram":
                continue
            if isinstance(v, Band):
                parts.append(str(v))
            elif isinstance(v, (tuple, list)):
                parts.append(f"{k}={','.join(str(x) for x in v)}")
            elif isinstance(v, bool):
                parts.append(f"{k}={int(v)}")
            else:
                parts.append(f"{k}={v}")
        if self.trust != "verified":
            parts.append(f"trust={self.trust}")
        return " ".join(parts)


@dataclass(frozen=True)
class MoveScript:
    initial: LinkDiagram | None
    steps: tuple = ()
    expected_final: LinkDiagram | None = None
    expect_empty: bool = False

    def to_text(self) -> str:
        lines = [SCRIPT_HEADER]
        lines += [m.to_line() for m in self.steps]
        if self.expect_empty:
            lines.append("expect: empty")
        return "\n".join(lines) + "\n"


@dataclass
class StepResult:
    index: int
    kind: str
    status: str
    checks: list = field(default_factory=list)
    message: str = ""
    crossings: int = 0
    components: int = 0


@dataclass
class ReplayReport:
    steps: list
    status: str
    final: LinkDiagram | None
    failed_step: int | None = None
    reason: str = ""
    final_match: str = "n/a"

    @property
    def exit_code(self) -> int:
        if self.status == "failed":
            return 1
        return 10 if self.status == "asserted" else 0

    def lines(self) -> list:
        out = []
        for s in self.steps:
            line = f"step={s.index} kind={s.kind} status={s.status} crossings={s.crossings} components={s.components}"
            if s.checks:
                line += " " + " ".join(f"{k}={v}" for k, v in s.checks)
            if s.message:
                line += f" reason={s.message!r}"
            out.append(line)
        out.append(f"final_match={self.final_match}")
        if self.failed_step is not None:
            out.append(f"failed_step={self.failed_step}")
            out.append(f"reason={self.reason!r}")
        out.append(f"status={self.status}")
        return out


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------


def _int_list(v: str) -> tuple:
    return tuple(int(x) for x in v.split(",") if x)


_INT_KEYS = {
    "edge",
    "edge1",
    "edge2",
    "crossing",
    "sign",
    "moving",
    "over",
    "meridian",
    "target",
    "dotted",
    "handle2",
}


def parse_script(text: str, base_dir: str = ".", initial: LinkDiagram | None = None) -> MoveScript:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != SCRIPT_HEADER:
        raise ValueError(f"missing header {SCRIPT_HEADER!r}")
    steps = []
    expected = None
    expect_empty = False
    for ln in lines[1:]:
        if ln.startswith("initial:"):
            if initial is None:
                initial = _load(os.path.join(base_dir, ln.split(":", 1)[1].strip()))
            continue
        if ln.startswith("expect:"):
            target = ln.split(":", 1)[1].strip()
            if target == "empty":
                expect_empty = True
            else:
                expected = _load(os.path.join(base_dir, target))
            continue
        toks = ln.split()
        if toks[0] != "step" or len(toks) < 2:
            raise ValueError(f"bad script line {ln!r}")
        kind = toks[1]
        rest = toks[2:]
        direction = ""
        if rest and rest[0] in ("do", "undo"):
            direction = rest.pop(0)
        trust = "verified"
        params = []
        band_toks = []
        for tok in rest:
            k, _, v = tok.partition("=")
            if k == "trust":
                trust = v
            elif k in ("start", "end", "cross", "twists"):
                band_toks.append(tok)
            elif k == "crossings":
                params.append((k, _int_list(v)))
            elif k == "replace":
                params.append((k, v))
                params.append(("diagram", _load(os.path.join(base_dir, v))))
            elif k in _INT_KEYS:
                params.append((k, int(v)))
            else:
                params.append((k, v))
        if band_toks:
            params.append(("band", Band.parse(" ".join(band_toks))))
        steps.append(Move(kind, tuple(params), direction, trust))
    return MoveScript(initial, tuple(steps), expected, expect_empty)


def _load(path: str) -> LinkDiagram:
    with open(path) as fh:
        return parse_diagram(fh.read())


def serialize_script(script: MoveScript) -> str:
    return script.to_text()


# --------------------------------------------------------------------------
# Applying single moves
# --------------------------------------------------------------------------


def apply_move(d: LinkDiagram, m: Move) -> tuple:
    """Apply one move; returns ``(diagram, status, checks)``."""
    a = m.args
    k = m.kind
    checks = []
    status = m.trust
    if k == "R1":
        if m.direction == "undo":
            out = mv.r1_undo(d, a["crossing"])
        else:
            out = mv.r1_do(d, a["edge"], a["side"], a["sign"])
        checks += _isotopy_checks(d, out)
    elif k == "R2":
        if m.direction == "undo":
            out = mv.r2_undo(d, a["crossings"])
        else:
            over = str(a.get("over", 1)) not in ("0", "False", "u")
            out = mv.r2_do(d, a["edge1"], a["side1"], a["edge2"], a["side2"], over)
        checks += _isotopy_checks(d, out)
    elif k == "R3":
        out = mv.r3(d, a["edge"], a["side"])
        checks += _isotopy_checks(d, out)
    elif k == "Slide":
        out, more = _slide(d, a["moving"], a["over"], a["band"])
        checks += more
    elif k == "SlamDunk":
        from .homology import h1_of_surgery

        before = h1_of_surgery(d)
        out = mv.slam_dunk(d, a["meridian"], a["target"])
        after = h1_of_surgery(out) if out.num_components else None
        ok = (after == before) if after is not None else before.is_trivial
        checks.append(("h1_preserved", "ok" if ok else "FAIL"))
        if not ok:
            raise mv.MoveError(f"slam-dunk changed H1 from {before} to {after}")
    elif k == "BandSurgery":
        out = mv.band_surgery(d, a["band"])
    elif k == "RibbonMove":
        pattern = dict(a)
        if "replace" in pattern:
            pattern = {"kind": "replace", "diagram": a["diagram"]}
        else:
            pattern["kind"] = pattern.pop("pattern", "R2")
            if m.direction == "undo":
                pattern["kind"] = "R2-undo"
        out, trust = mv.ribbon_move(d, a["dotted"], pattern)
        if trust == "asserted":
            status = "asserted"
    elif k == "CancelHopfPair":
        before = linking_matrix(d)
        i, j = a["dotted"], a["handle2"]
        out = mv.cancel_hopf_pair(d, i, j, trust=m.trust)
        keep = [x for x in range(d.num_components) if x not in (i, j)]
        want = [[before[r][c] for c in keep] for r in keep]
        ok = linking_matrix(out) == want if keep else out.num_components == 0
        checks.append(("linking_restricted", "ok" if ok else "FAIL"))
        if not ok:
            raise mv.MoveError("cancellation disturbed the remaining linking matrix")
    elif k == "ExpandTwistBox":
        out = expand_twist_boxes(d)
    elif k == "Relabel":
        out = canonical_form(d)
        checks.append(("isomorphic", "ok" if diagrams_isomorphic(d, out) else "FAIL"))
    else:  # pragma: no cover - guarded by Move
        raise mv.MoveError(f"unknown move {k}")
    checks.insert(0, ("planar", "ok" if _planar(out) else "FAIL"))
    return out, status, checks


def _planar(d: LinkDiagram) -> bool:
    for piece in d.pieces:
        if piece["loop"]:
            continue
        if len(piece["crossings"]) - len(piece["edges"]) + len(piece["faces"]) != 2:
            return False
    return True


def _isotopy_checks(before: LinkDiagram, after: LinkDiagram) -> list:
    if before.num_components != after.num_components:
        raise mv.MoveError("Reidemeister move changed the component count")
    a, b = linking_matrix(before), linking_matrix(after)
    n = len(a)
    ok = all(a[i][j] == b[i][j] for i in range(n) for j in range(n) if i != j)
    deco = [(c.framing, c.dotted, c.bracketed) for c in before.components] == [
        (c.framing, c.dotted, c.bracketed) for c in after.components
    ]
    if not (ok and deco):
        raise mv.MoveError("Reidemeister move changed linking numbers or decorations")
    return [("linking_preserved", "ok"), ("decorations_preserved", "ok")]


def _slide(d: LinkDiagram, moving: int, over: int, band: Band):
    c1, c2 = d.components[moving], d.components[over]
    lk_before = linking_matrix(d)
    w1, w2 = writhe(d, moving), writhe(d, over)
    if c2.dotted:
        out = mv.slide_under_one_handle(d, moving, over, band)
        n2 = 0
    else:
        out = mv.handleslide(d, moving, over, band)
        n2 = c2.framing.p
    n1 = c1.framing.p
    new = out.components[moving].framing.p
    # output framing must agree with the twisting visible in the output diagram
    recomputed = writhe(out, moving) + (n1 - w1) + (n2 - w2)
    checks = [("framing", new), ("framing_law", "ok" if recomputed == new else "FAIL")]
    lk_after = linking_matrix(out)
    eps = 1 if mv.band_is_coherent(band) else -1
    law = True
    for x in range(d.num_components):
        if x == moving:
            continue
        # the push-off of `over` links `over` itself n2 times
        via = n2 if x == over else lk_before[over][x]
        if lk_after[moving][x] != lk_before[moving][x] + eps * via:
            law = False
    checks.append(("linking_law", "ok" if law else "FAIL"))
    if recomputed != new or not law:
        raise mv.MoveError("slide output violates the framing or linking law")
    return out, checks


# --------------------------------------------------------------------------
# Replay
# --------------------------------------------------------------------------


def replay(script: MoveScript, initial: LinkDiagram | None = None) -> ReplayReport:
    d = initial if initial is not None else script.initial
    if d is None:
        raise ValueError("script has no initial diagram")
    results = []
    any_asserted = False
    for i, m in enumerate(script.steps, start=1):
        try:
            d, status, checks = apply_move(d, m)
        except (DiagramError, KeyError, IndexError, ValueError) as exc:
            msg = str(exc) if not isinstance(exc, KeyError) else f"missing or unknown reference {exc}"
            results.append(StepResult(i, m.kind, "failed", [], msg))
            return ReplayReport(results, "failed", d, i, msg)
        any_asserted |= status == "asserted"
        results.append(StepResult(i, m.kind, status, checks, "", d.num_crossings, d.num_components))
    match = "n/a"
    expected = script.expected_final
    if script.expect_empty:
        expected = LinkDiagram()
    if expected is not None:
        ok = diagrams_isomorphic(d, expected)
        match = "isomorphic" if ok else "different"
        if not ok:
            return ReplayReport(results, "failed", d, len(script.steps), "final diagram differs", match)
    return ReplayReport(results, "asserted" if any_asserted else "verified", d, None, "", match)
