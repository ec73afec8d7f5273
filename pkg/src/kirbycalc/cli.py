"""Command-line entry point: ``kirbycalc <command> ...``.

Reports are line-oriented ``key=value`` records (``--format kv``) or the
same records as ``key: value`` (``--format text``).  Exit codes: 0 pass or
verified, 1 error or failure, 2 definitive negative verdict, 3
inconclusive, 10 success resting on asserted steps.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .diagram import DiagramError, DiagramSyntaxError, parse_diagram

EXIT_OK, EXIT_FAIL, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_ASSERTED = 0, 1, 2, 3, 10


@dataclass
class RunReport:
    command: str
    inputs: list = field(default_factory=list)
    results: list = field(default_factory=list)
    exit_code: int = EXIT_OK
    seconds: float | None = None

    def add(self, key: str, value) -> None:
        self.results.append((key, value))

    def extend(self, lines) -> None:
        for ln in lines:
            k, _, v = ln.partition("=")
            self.add(k, v)

    def records(self) -> list:
        out = [("command", self.command)]
        for path, digest in self.inputs:
            out += [("input", path), ("sha256", digest)]
        out += self.results
        out.append(("exit_code", self.exit_code))
        if self.seconds is not None:
            out.append(("seconds", f"{self.seconds:.3f}"))
        return out

    def render(self, fmt: str = "kv") -> str:
        sep = "=" if fmt == "kv" else ": "
        return "\n".join(f"{k}{sep}{v}" for k, v in self.records()) + "\n"


# --------------------------------------------------------------------------
# Corpus and input helpers
# --------------------------------------------------------------------------


def corpus_root() -> Path:
    env = os.environ.get("KIRBYCALC_CORPUS")
    if env:
        return Path(env)
    return Path(str(resources.files("kirbycalc") / "corpus"))


def resolve(path: str) -> Path:
    """A literal path, else a corpus entry (``trefoil`` finds ``trefoil.kd``)."""
    p = Path(path)
    if p.exists():
        return p
    root = corpus_root()
    for cand in (root / path, root / f"{path}.kd", root / f"{path}.ks"):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no such file or corpus entry: {path}")


def corpus_entries() -> list:
    return sorted(p.name for p in corpus_root().iterdir() if p.suffix in (".kd", ".ks"))


def _read(report: RunReport, path: str) -> tuple:
    p = resolve(path)
    data = p.read_bytes()
    report.inputs.append((str(path), hashlib.sha256(data).hexdigest()))
    return p, data.decode()


def _load_diagram(report: RunReport, path: str):
    _, text = _read(report, path)
    return parse_diagram(text)


def _budget(args):
    from .search import SearchBudget

    return SearchBudget(
        max_nodes=args.budget_nodes,
        seconds=args.budget_seconds,
        seed=args.seed,
        workers=args.workers,
    )


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_validate(args) -> RunReport:
    r = RunReport("validate")
    try:
        d = _load_diagram(r, args.path)
    except DiagramSyntaxError as exc:
        r.add("valid", "no")
        r.add("error", str(exc))
        r.add("line", exc.line)
        r.add("col", exc.col)
        r.exit_code = EXIT_FAIL
        return r
    except DiagramError as exc:
        r.add("valid", "no")
        r.add("error", str(exc))
        r.exit_code = EXIT_FAIL
        return r
    r.add("valid", "yes")
    r.add("crossings", d.num_crossings)
    r.add("components", d.num_components)
    r.add("twist_boxes", len(d.twist_boxes))
    for i, c in enumerate(d.components):
        r.add(f"component_{i}", f"framing={c.framing} dotted={int(c.dotted)} bracketed={int(c.bracketed)}")
    return r


def cmd_invariants(args) -> RunReport:
    from . import concordance as cc

    r = RunReport("invariants")
    d = _load_diagram(r, args.path)
    g, V = cc.seifert_surface(d)
    delta = cc.alexander_polynomial(V)
    sig = cc.signature(V)
    fm = cc.fox_milnor(delta)
    r.add("genus_algorithmic", g)
    r.add("genus_input_diagram", cc.diagram_genus(d))
    r.add("vogel_moves", V.vogel_moves)
    r.add("braid", " ".join(str(x) for x in V.braid[1]) or "empty")
    r.add("seifert_matrix", ";".join(",".join(str(x) for x in row) for row in V.matrix) or "empty")
    r.add("alexander", delta)
    r.add("signature", sig)
    r.add("fox_milnor", "pass" if fm is not None else "fail")
    if fm is not None:
        r.add("fox_milnor_witness", fm)
    r.add("fibered_necessary", "pass" if cc.fibered_necessary(delta, g) else "fail")
    return r


def cmd_replay(args) -> RunReport:
    from .script import parse_script, replay

    r = RunReport("replay")
    paths = args.paths
    initial = None
    if len(paths) == 2:
        initial = _load_diagram(r, paths[0])
    sp, text = _read(r, paths[-1])
    script = parse_script(text, base_dir=str(sp.parent), initial=initial)
    rep = replay(script)
    r.extend(rep.lines())
    r.exit_code = rep.exit_code
    return r


def cmd_surgery_h1(args) -> RunReport:
    from .homology import presentation_matrix, smith_normal_form

    r = RunReport("surgery-h1")
    d = _load_diagram(r, args.path)
    comps = [int(x) for x in args.components.split(",")] if args.components else None
    pm = presentation_matrix(d, comps)
    r.add("components", ",".join(map(str, pm.components)))
    r.add("matrix", ";".join(",".join(map(str, row)) for row in pm.matrix) or "empty")
    if pm.size:
        inv, cert = smith_normal_form(pm)
        r.add("snf_certificate", "verified" if cert.verify(pm.matrix) else "FAILED")
        r.add("smith_diagonal", ",".join(str(cert.D[i][i]) for i in range(pm.size)))
    else:
        from .homology import AbelianInvariants

        inv = AbelianInvariants(0)
    r.add("h1", inv)
    if pm.dotted_as_zero:
        r.add("note", "dotted circles read as 0-framed unknots")
    return r


def cmd_rbg_check(args) -> RunReport:
    from .homology import check_rbg_homology

    r = RunReport("rbg-check")
    d = _load_diagram(r, args.path)
    v = check_rbg_homology(d, args.r, args.b, args.g)
    r.extend(v.lines())
    r.exit_code = EXIT_OK if v.passed else EXIT_NEGATIVE
    return r


def cmd_rlink_check(args) -> RunReport:
    from .homology import check_rlink_homology

    r = RunReport("rlink-check")
    d = _load_diagram(r, args.path)
    v = check_rlink_homology(d)
    if not v.passed:
        r.extend(v.lines())
        r.exit_code = EXIT_NEGATIVE
        return r
    if not args.pi1:
        r.extend(v.lines())
        return r
    from .pi1 import certify_free, surgered_presentation

    n = d.num_components
    fc = certify_free(surgered_presentation(d), n, args.tietze_budget)
    lines = v.lines()
    lines[0] = f"verdict=pass+{'free' if fc.status == 'yes' else 'inconclusive'}({n})"
    r.extend(lines)
    r.add("pi1_free", fc.status)
    r.add("pi1_abelianization", fc.abelianization)
    if fc.presentation is not None:
        r.add("pi1_presentation", fc.presentation)
    if fc.certificate is not None:
        r.add("tietze_moves", len(fc.certificate))
    if fc.reason:
        r.add("pi1_reason", fc.reason)
    r.exit_code = EXIT_OK if fc.status == "yes" else EXIT_INCONCLUSIVE
    return r


def cmd_derivative_check(args) -> RunReport:
    from .concordance import CurveSystem, SeifertMatrix, derivative_check, parse_int_matrix

    r = RunReport("derivative-check")
    _, mtext = _read(r, args.matrix)
    _, ctext = _read(r, args.classes)
    V = SeifertMatrix.from_rows(parse_int_matrix(mtext))
    C = CurveSystem(tuple(tuple(v) for v in parse_int_matrix(ctext)))
    v = derivative_check(V, C)
    r.add("genus", V.genus)
    r.extend(v.lines())
    r.exit_code = EXIT_OK if v.passed else EXIT_NEGATIVE
    return r


def cmd_certify_unlink(args) -> RunReport:
    from .search import certify_unlink

    r = RunReport("certify-unlink")
    d = _load_diagram(r, args.path)
    c = certify_unlink(d, d.num_components, _budget(args))
    r.add("components", d.num_components)
    r.add("crossings", d.num_crossings)
    r.add("status", c.status)
    if c.reason:
        r.add("reason", c.reason)
    if c.script is not None:
        r.add("script_steps", len(c.script.steps))
        if c.certified:
            r.add("certificate", " | ".join(m.to_line() for m in c.script.steps) or "empty")
        if args.emit_script and c.certified:
            Path(args.emit_script).write_text(c.script.to_text())
    r.exit_code = {"certificate": EXIT_OK, "not-unlink": EXIT_NEGATIVE}.get(c.status, EXIT_INCONCLUSIVE)
    return r


def cmd_band_search(args) -> RunReport:
    from .search import band_search

    r = RunReport("band-search")
    d = _load_diagram(r, args.path)
    rep = band_search(d, _budget(args), args.max_band_length, args.max_twists)
    for k, v in rep.invariants.items():
        r.add(k, v)
    if rep.obstruction:
        r.add("obstruction", rep.obstruction)
    for k in sorted(rep.stats):
        r.add(f"stat_{k}", rep.stats[k])
    r.add("certified", len(rep.certified))
    r.add("uncertified", len(rep.candidates) - len(rep.certified))
    for i, c in enumerate(rep.candidates[: args.show]):
        line = f"{c.status} {c.band}"
        if c.certificate is not None:
            line += f" certificate_steps={len(c.certificate.steps)}"
        r.add(f"candidate_{i}", line)
    if rep.obstruction:
        r.exit_code = EXIT_NEGATIVE
    elif not rep.certified:
        r.exit_code = EXIT_INCONCLUSIVE
    return r


def cmd_corpus(args) -> RunReport:
    r = RunReport("corpus")
    r.add("root", corpus_root())
    for name in corpus_entries():
        r.add("entry", name)
    return r


COMMANDS = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "replay": cmd_replay,
    "surgery-h1": cmd_surgery_h1,
    "rbg-check": cmd_rbg_check,
    "rlink-check": cmd_rlink_check,
    "derivative-check": cmd_derivative_check,
    "certify-unlink": cmd_certify_unlink,
    "band-search": cmd_band_search,
    "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "kv"), default="kv")
    common.add_argument("--budget-nodes", type=int, default=2000)
    common.add_argument("--budget-seconds", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--max-band-length", type=int, default=1)
    common.add_argument("--max-twists", type=int, default=1)
    common.add_argument("--timing", action="store_true", help="append wall-clock seconds to the report")

    p = argparse.ArgumentParser(prog="kirbycalc", description="Exact Kirby calculus on framed link diagrams.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="parse and validate a diagram")
    s.add_argument("path")
    s = sub.add_parser("invariants", parents=[common], help="genus, Alexander polynomial, signature, Fox-Milnor")
    s.add_argument("path")
    s = sub.add_parser("replay", parents=[common], help="replay a move script: [DIAGRAM] SCRIPT")
    s.add_argument("paths", nargs="+")
    s = sub.add_parser("surgery-h1", parents=[common], help="first homology of the surgered manifold")
    s.add_argument("path")
    s.add_argument("--components", default=None, help="comma-separated component indices")
    s = sub.add_parser("rbg-check", parents=[common], help="homological RBG conditions")
    s.add_argument("path")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s = sub.add_parser("rlink-check", parents=[common], help="R-link conditions")
    s.add_argument("path")
    s.add_argument("--pi1", action="store_true", help="also certify the surgered fundamental group is free")
    s.add_argument("--tietze-budget", type=int, default=100_000)
    s = sub.add_parser("derivative-check", parents=[common], help="homological derivative-link certificate")
    s.add_argument("matrix")
    s.add_argument("classes")
    s = sub.add_parser("certify-unlink", parents=[common], help="search for a certificate that a diagram is an unlink")
    s.add_argument("path")
    s.add_argument("--emit-script", default=None)
    s = sub.add_parser("band-search", parents=[common], help="search single ribbon bands")
    s.add_argument("path")
    s.add_argument("--show", type=int, default=10, help="number of candidates listed")
    sub.add_parser("corpus", parents=[common], help="list bundled corpus entries")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        report = COMMANDS[args.command](args)
    except (OSError, DiagramError, ValueError) as exc:
        report = RunReport(args.command)
        report.add("error", f"{type(exc).__name__}: {exc}")
        report.exit_code = EXIT_FAIL
    if getattr(args, "timing", False):
        report.seconds = time.monotonic() - t0
    sys.stdout.write(report.render(args.format))
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
