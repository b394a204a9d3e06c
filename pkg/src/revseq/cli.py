"""Command-line front end.

Exit codes: 0 success, 1 a verification found mismatches, 2 usage or input
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .claims import claims_ledger, filter_records, improvement_records, render_report
from .errors import NetlistSyntaxError, RevseqError, UnknownGateError
from .netlist import metrics, parse_netlist, parse_stimulus, run_trace
from .perm import BUILTIN_NAMES, Permutation, builtin_gate, is_balanced, is_bijective, iter_builtin_gates
from .quantum import REGISTERED_NAMES, verify_registry
from .sequential import DESIGN_IDS, verify_characteristic

ATLAS_ENV = "REVSEQ_ATLAS"

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _out(text=""):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _note(text):
    sys.stderr.write(text + "\n")


def _bits(code, width):
    return " ".join(str((code >> (width - 1 - i)) & 1) for i in range(width))


# -- atlas -----------------------------------------------------------------

def _atlas(args, width=3):
    from .synth import CostAtlas, build_cost_atlas

    path = getattr(args, "atlas", None) or os.environ.get(ATLAS_ENV)
    if path and Path(path).exists():
        atlas = CostAtlas.load(path)
        if atlas.width == width:
            return atlas
        _note(f"atlas snapshot {path} has width {atlas.width}; building width {width}")
    _note(f"building cost atlas (width {width}, max cost 5) in process ...")
    return build_cost_atlas(width, 5)


# -- gates -------------------------------------------------------------------

def cmd_gates(args):
    if args.action == "list":
        for g in iter_builtin_gates():
            cost = "-" if g.claimed_cost is None else g.claimed_cost
            _out(f"{g.name:<4} width {g.width}  claimed cost {cost:<2}  {g.note}")
        return EXIT_OK
    if not args.name:
        raise UsageError(f"gates {args.action} needs a gate name")
    g = builtin_gate(args.name)
    if args.action == "table":
        _out(" ".join(g.inputs) + " | " + " ".join(g.outputs))
        for x, y in enumerate(g.perm.map):
            _out(_bits(x, g.width) + " | " + _bits(y, g.width))
        return EXIT_OK
    bij = is_bijective(g.perm.map)
    cols = [is_balanced(g.perm.column(i)) for i in range(g.width)]
    _out(f"{g.name}: bijective {'yes' if bij else 'NO'}")
    for lab, ok in zip(g.outputs, cols):
        _out(f"  output {lab}: {'balanced' if ok else 'NOT balanced'}")
    return EXIT_OK if bij and all(cols) else EXIT_MISMATCH


# -- qc ----------------------------------------------------------------------

def cmd_qc(args):
    if args.action == "verify":
        names = [args.name.upper()] if args.name else list(REGISTERED_NAMES)
        checks = verify_registry(names)
        _out(f"{'gate':<5} {'equiv':<6} {'unitary':<8} {'ncv':>4} {'cost':>5} {'claim':>6} {'depth':>6}  result")
        for c in checks:
            claim = "-" if c.claimed_cost is None else str(c.claimed_cost)
            _out(f"{c.name:<5} {str(c.equivalent):<6} {str(c.unitary):<8} {c.ncv_count:>4} {c.quantum_cost:>5} "
                 f"{claim:>6} {c.depth:>6}  {'pass' if c.passed else 'FAIL'}")
        return EXIT_OK if all(c.passed for c in checks) else EXIT_MISMATCH

    if args.action == "synth":
        from .synth import min_cost_synthesis

        if args.perm:
            codes = [int(t) for t in Path(args.perm).read_text().split()]
            width = max(len(codes).bit_length() - 1, 0)
            try:
                perm = Permutation(width, tuple(codes))
            except ValueError as exc:
                raise UsageError(f"{args.perm}: {exc}") from None
            label = args.perm
        elif args.name:
            perm = builtin_gate(args.name).perm
            label = args.name.upper()
        else:
            raise UsageError("qc synth needs a gate name or --perm FILE")
        res = min_cost_synthesis(perm, args.max_cost, _atlas(args, perm.width))
        if res is None:
            _out(f"{label}: no realization within the search bound")
            return EXIT_MISMATCH
        _out(f"{label}: map {' '.join(map(str, perm.map))}")
        _out(f"  minimum NCV count   {res.ncv_count}  ({res.method}, {res.realizations} minimal circuits)")
        _out(f"  minimum 2x2 cost    {res.quantum_cost}")
        _out(f"  circuit             {res.circuit}")
        _out(f"  lexicographic first {res.lex_witness}")
        return EXIT_OK

    if args.action == "atlas":
        from .synth import build_cost_atlas

        atlas = build_cost_atlas(args.width, 5 if args.max_cost is None else args.max_cost)
        if args.out:
            atlas.save(args.out)
            _note(f"wrote {len(atlas)} entries to {args.out}")
        by_cost = {}
        for e in atlas.entries.values():
            by_cost[e.cost] = by_cost.get(e.cost, 0) + 1
        _out(f"width {atlas.width}, max cost {atlas.max_cost}: {len(atlas)} permutations")
        for k in sorted(by_cost):
            _out(f"  cost {k}: {by_cost[k]}")
        _out(f"  unitary classes per level: {' '.join(map(str, atlas.level_sizes))}")
        _out(f"  digest {atlas.digest()}")
        return EXIT_OK
    raise UsageError(f"unknown qc action {args.action!r}")


# -- netlists ------------------------------------------------------------------

def _load_netlist(path):
    return parse_netlist(Path(path).read_text())


def cmd_analyze(args):
    n = _load_netlist(args.file)
    m = metrics(n)
    data = {
        "width": n.width, "cells": m.gate_count, "quantum_cost": m.quantum_cost,
        "ncv_count": m.ncv_count, "delay": m.delay, "serial_delay": m.serial_delay, "garbage": m.garbage,
    }
    if args.json:
        _out(json.dumps(data, indent=2))
    else:
        for k, v in data.items():
            _out(f"{k:<13} {v}")
    return EXIT_OK


def cmd_sim(args):
    n = _load_netlist(args.file)
    trace = parse_stimulus(Path(args.stimulus).read_text())
    steps = run_trace(n, trace, settle=not args.single_pass)
    labels = [lab for _, lab in n.outputs]
    ins = n.input_labels
    _out("step  " + " ".join(ins) + " | " + " ".join(labels) + " | feedback")
    for k, st in enumerate(steps):
        _out(f"{k:<5} " + " ".join(str(st.inputs.get(i, "-")).rjust(len(i)) for i in ins) + " | "
             + " ".join(str(st.outputs[lab]).rjust(len(lab)) for lab in labels) + " | "
             + "".join(map(str, st.feedback)))
    return EXIT_OK


# -- flip-flops & reports ------------------------------------------------------

def cmd_ff(args):
    ids = DESIGN_IDS if args.design == "all" else (args.design,)
    ok = True
    for d in ids:
        if d not in DESIGN_IDS:
            raise UnknownGateError(f"unknown design {d!r}; known: {', '.join(DESIGN_IDS)}")
        rep = verify_characteristic(d)
        ok &= rep.passed
        _out(f"{d:<9} {rep.characteristic:<9} {rep.mode:<7} {rep.n_passed}/{len(rep.rows)} "
             f"{'pass' if rep.passed else 'FAIL'}")
        if args.verbose or not rep.passed:
            for r in rep.rows:
                if args.verbose or not r.passed:
                    _out(f"    in {dict(r.inputs)} state {dict(r.state)} -> {r.got} (expect {r.expected})"
                         f"{'  ' + r.error if r.error else ''}")
    return EXIT_OK if ok else EXIT_MISMATCH


def _synth_results(args):
    from .synth import min_cost_synthesis

    atlas = _atlas(args)
    names = ("FG", "DFG", "TG", "FRG", "PG", "SAM", "MPG")
    out = {}
    for name in names:
        g = builtin_gate(name)
        if g.width == 3:
            out[name] = min_cost_synthesis(g.perm, None, atlas)
    return out


def cmd_report(args):
    if args.kind == "improvements":
        records = improvement_records()
    else:
        records = claims_ledger(_synth_results(args) if args.exhaustive else None)
    records = filter_records(records, args.design, args.flagged)
    sys.stdout.write(render_report(records, "json" if args.json else "text"))
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="revseq", description="Reversible gate and latch workbench.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--atlas", metavar="FILE",
                   help=f"cost atlas snapshot (default: ${ATLAS_ENV}; built in process when absent)")
    sub = p.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("gates", help="inspect the gate library")
    g.add_argument("action", choices=("list", "table", "check"))
    g.add_argument("name", nargs="?", help=f"one of {', '.join(BUILTIN_NAMES)}")
    g.set_defaults(func=cmd_gates)

    q = sub.add_parser("qc", help="quantum decompositions and exhaustive synthesis")
    q.add_argument("action", choices=("verify", "synth", "atlas"))
    q.add_argument("name", nargs="?")
    q.add_argument("--perm", metavar="FILE", help="file holding 2^w output codes")
    q.add_argument("--max-cost", type=int, default=None, help="NCV search bound")
    q.add_argument("--width", type=int, default=3)
    q.add_argument("--out", metavar="FILE", help="write the atlas snapshot here")
    q.set_defaults(func=cmd_qc)

    a = sub.add_parser("analyze", help="netlist metrics")
    a.add_argument("file")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sim", help="drive a netlist with a stimulus file")
    s.add_argument("file")
    s.add_argument("--stimulus", required=True, metavar="FILE", help="one step per line: LABEL=0|1 ...")
    s.add_argument("--single-pass", action="store_true", help="one pass per step instead of settling")
    s.set_defaults(func=cmd_sim)

    f = sub.add_parser("ff", help="verify latch and flip-flop designs")
    f.add_argument("action", choices=("verify",))
    f.add_argument("design", help=f"'all' or one of {', '.join(DESIGN_IDS)}")
    f.add_argument("-v", "--verbose", action="store_true")
    f.set_defaults(func=cmd_ff)

    r = sub.add_parser("report", help="published figures versus computed values")
    r.add_argument("kind", choices=("claims", "improvements"))
    r.add_argument("--json", action="store_true")
    r.add_argument("--design", help="only records for this design or gate")
    r.add_argument("--flagged", action="store_true", help="only records whose verdict is not 'match'")
    r.add_argument("--exhaustive", action="store_true",
                   help="add exhaustive minimum-cost records for the 3-line gates (needs the atlas)")
    r.set_defaults(func=cmd_report)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _note(f"revseq: error: {exc}")
    except NetlistSyntaxError as exc:
        _note(f"revseq: {getattr(args, 'file', '')}: {exc} [{exc.kind}]")
    except UnknownGateError as exc:
        _note(f"revseq: error: {exc.args[0]}")
    except (OSError, RevseqError, ValueError) as exc:
        _note(f"revseq: error: {exc}")
    return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
