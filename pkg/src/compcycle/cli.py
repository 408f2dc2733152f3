"""``compcycle`` command line: check, fixtures, render."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .core import DEFAULT_MAX_WITNESSES
from .dsl import Model, SpecError, export_dot, parse_with_diagnostics
from .dsl.model import CATEGORY_KINDS, ERROR
from .errors import CategoryError
from .fixtures import KINDS as FIXTURE_KINDS
from .fixtures import fixture_text
from .maps import DEFAULT_BUDGET
from .report import check_spec

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

_COLORS = {"ok": "32", "fail": "31", "warn": "33", "dim": "2"}


class _Style:
    def __init__(self, stream):
        mode = os.environ.get("COMPCYCLE_COLOR", "auto").lower()
        if mode == "always":
            self.on = True
        elif mode == "never":
            self.on = False
        else:
            self.on = hasattr(stream, "isatty") and stream.isatty()

    def __call__(self, text, role):
        return f"\033[{_COLORS[role]}m{text}\033[0m" if self.on else text


def _print_diagnostics(path, diags, stream):
    style = _Style(stream)
    for d in diags:
        role = "fail" if d.severity == ERROR else "warn"
        print(f"{path}:{style(str(d), role)}", file=stream)


def _load(path: str):
    """Parse a spec file, printing diagnostics; None when it has errors."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{path}: cannot read: {exc}", file=sys.stderr)
        return None
    spec, diags = parse_with_diagnostics(text)
    _print_diagnostics(path, diags, sys.stderr)
    return spec


def _status_line(entry, style):
    label = f"{entry.kind} {entry.name}"
    if "direction" in entry.extra and entry.kind == "claim":
        label += f" ({entry.extra['direction']})"
    if entry.ok:
        line = f"{style('PASS', 'ok')}  {label}"
    else:
        line = (f"{style('FAIL', 'fail')}  {label}: stage {entry.stage}, "
                f"{entry.counterexample_count} counterexample(s)")
    if entry.kind == "audit":
        line += (f"  simple={entry.extra['n_state_maps_simple']} "
                 f"functorial={entry.extra['n_functorial']} "
                 f"strict={str(entry.extra['strictness']).lower()}")
    return line


def cmd_check(args) -> int:
    spec = _load(args.file)
    if spec is None:
        return EXIT_INVALID
    try:
        report = check_spec(spec, args.file, args.max_witnesses, args.max_candidates, args.timing)
    except SpecError as exc:
        _print_diagnostics(args.file, exc.diagnostics, sys.stderr)
        return EXIT_INVALID
    style = _Style(sys.stdout)
    print(f"compcycle {__version__}: {args.file}")
    for entry in report.entries():
        print(_status_line(entry, style))
        for w in entry.witnesses:
            print(style(f"      {w}", "dim"))
    n_bad = sum(not e.ok for e in report.entries())
    summary = "all checks passed" if report.ok else f"{n_bad} check(s) failed"
    if report.wall_time is not None:
        summary += f" in {report.wall_time:.3f}s"
    print(style(summary, "ok" if report.ok else "fail"))
    if args.json:
        Path(args.json).write_text(report.to_json(), encoding="utf-8")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_fixtures(args) -> int:
    try:
        text = fixture_text(args.kind, args.base, args.width, args.len)
    except CategoryError as exc:
        print(f"fixtures: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _renderable(model: Model, name: str):
    """The object a selection names: a category-like declaration, a claim
    with a physical/abstract pair, or a natural transformation."""
    spec = model.spec
    for kind in CATEGORY_KINDS:
        if spec.get(kind, name) is not None:
            return model.category(name)
    claim = spec.get("claim", name)
    if claim is not None and claim.R is not None and claim.Rt is not None:
        return model.cycle_claim(name, claim.direction)
    if spec.get("nattrans", name) is not None:
        return model.nattrans(name)
    return None


def cmd_render(args) -> int:
    spec = _load(args.file)
    if spec is None:
        return EXIT_INVALID
    model = Model(spec)
    targets = []
    try:
        for name in args.select:
            obj = _renderable(model, name)
            if obj is None:
                print(f"render: nothing renderable named {name!r}", file=sys.stderr)
                return EXIT_INVALID
            targets.append((name, obj))
    except SpecError as exc:
        _print_diagnostics(args.file, exc.diagnostics, sys.stderr)
        return EXIT_INVALID
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, obj in targets:
        path = out / f"{name}.dot"
        path.write_text(export_dot(obj, name), encoding="utf-8")
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="compcycle", description=(
        "Check categories, functors and compute-cycle claims written as .catspec files."))
    p.add_argument("--version", action="version", version=f"compcycle {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run every law check, claim and audit in a spec")
    c.add_argument("file")
    c.add_argument("--json", metavar="PATH", help="also write a JSON report here")
    c.add_argument("--max-candidates", type=int, default=DEFAULT_BUDGET, metavar="N",
                   help="enumeration budget for searches (default %(default)s)")
    c.add_argument("--max-witnesses", type=int, default=DEFAULT_MAX_WITNESSES, metavar="N",
                   help="witnesses kept per failing check (default %(default)s)")
    c.add_argument("--timing", action="store_true", help="report wall time")
    c.set_defaults(run=cmd_check)

    f = sub.add_parser("fixtures", help="emit a standard fixture as .catspec text")
    f.add_argument("kind", choices=FIXTURE_KINDS)
    f.add_argument("--base", type=int, default=10)
    f.add_argument("--width", type=int, default=2)
    f.add_argument("--len", type=int, default=3, help="chain length")
    f.add_argument("--out", metavar="PATH", help="write here instead of standard output")
    f.set_defaults(run=cmd_fixtures)

    r = sub.add_parser("render", help="write Graphviz DOT files for selected declarations")
    r.add_argument("file")
    r.add_argument("--select", nargs="+", required=True, metavar="NAME")
    r.add_argument("--out", required=True, metavar="DIR")
    r.set_defaults(run=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if getattr(args, "max_witnesses", 1) < 1 or getattr(args, "max_candidates", 1) < 1:
        print("budgets must be positive", file=sys.stderr)
        return EXIT_INVALID
    return args.run(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
