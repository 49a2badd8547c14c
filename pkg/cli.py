"""
Command Line - Parse, measure, run, generate, search and reproduce from one entry point

Exit codes: 0 success, 1 negative result (check fails, not equivalent,
nothing found), 2 usage or input error. Results go to stdout, diagnostics
and logs to stderr.
"""
import argparse
import logging
import os
import re
import sys
from typing import Dict, List, Optional

import config
from errors import IsaError
from execution import run
from function_tables import (
    TaskSpec, computes, equivalent, extract_function, nos_profile, parse_task,
)
from generators import (
    ADD_VARIANTS, E_VARIANTS, GENERATORS, choose_power, compile_pglb_tt, gen_bounded_jump,
    gen_copy1d, gen_universal, power, unfold_pglb,
)
from isa.instructions import PGA, PGLB, InstructionSequence
from isa.metrics import classify, jump_report, lloc, lloc_gsc, required_interface
from isa.syntax import GscSequence, expand_gsc, parse, parse_gsc
from records import FORMATS, Output, emit
from repro import ALIASES, BUNDLES, repro_report, run_bundle
from services.family import EMPTY_FAMILY, ServiceFamily
from services.interface import BasicActionInterface, parse_interface
from services.literals import parse_family, render_family
from shortest_search import SearchConstraints, min_lloc, search_report

logger = logging.getLogger(__name__)

OK, NEGATIVE, USAGE = 0, 1, 2

# a negative test at the start of a program, e.g. -in:1.i/i;...
_PROGRAM_ARG_RE = re.compile(r"^-[a-z][A-Za-z0-9_]*:")

SEQUENCE_HELP = """sequences are given inline or as a file path, e.g.
  "+in:1.i/i;#3;out0:1.1/1;!;!"     single pass
  "+in1D:3.i/i;out1D0:7.1/1;!;\\#3"   backward jump (PGLB)
  rep k=1..3 { +in:k.i/i;aux0:1.i/c };!   generalised semicolon (--gsc)
  // starts a comment"""

FAMILY_HELP = """families are given inline or as a file path, one binding per line or ';':
  in:1=br(0); out0:1=br(1)
  in1D:3=arr(i=0,c0=1,c1=0)
  out:1=br(1) [i/i 1/c]               restricted method interface"""

TASK_HELP = """task files name the layout and list table rows (missing rows are unconstrained):
  inputs: in:1 in:2
  outputs: out0:1
  aux: aux0:1
  00 -> 0
  01 -> 1"""

INTERFACE_HELP = """interfaces are given inline or as a file path:
  in:1.{i/i} + out0:1.{1/1,i/c}
  in:1.M16 + out:1.M16"""


def _read_text(value: str) -> str:
    value = value.lstrip()
    if os.path.isfile(value):
        with open(value, encoding="utf-8") as fh:
            return fh.read()
    return value


def shield_programs(argv: List[str]) -> List[str]:
    """Keep argparse from reading programs that start with a negative test as options"""
    return [" " + arg if _PROGRAM_ARG_RE.match(arg) else arg for arg in argv]


def _sequence(value: str) -> InstructionSequence:
    return parse(_read_text(value))


def _family(value: Optional[str]) -> ServiceFamily:
    return parse_family(_read_text(value)) if value else EMPTY_FAMILY


def _task(value: str) -> TaskSpec:
    return parse_task(_read_text(value))


def _interface(value: Optional[str]) -> Optional[BasicActionInterface]:
    return parse_interface(_read_text(value)) if value else None


def _write(out: Output):
    if isinstance(out, bytes):
        sys.stdout.buffer.write(out)
        sys.stdout.buffer.flush()
    else:
        sys.stdout.write(out)
        sys.stdout.flush()


def _nos_text(value) -> str:
    return "inf" if value == float("inf") else str(value)


# Subcommands -----------------------------------------------------------------


def cmd_parse(args) -> int:
    text = _read_text(args.seq)
    if args.gsc:
        g = parse_gsc(text)
        seq = expand_gsc(g)
        human = f"{g.render()}\n{seq.render()}"
        document = {"gsc": g.render(), "program": seq.render(), "dialect": seq.dialect}
    else:
        seq = parse(text)
        human = seq.render()
        document = {"program": seq.render(), "dialect": seq.dialect}
    _write(emit(document, args.format, human))
    return OK


def cmd_lloc(args) -> int:
    text = _read_text(args.seq)
    value = lloc_gsc(parse_gsc(text)) if args.gsc else lloc(parse(text))
    _write(emit({"lloc": value}, args.format, str(value)))
    return OK


def cmd_classify(args) -> int:
    seq = _sequence(args.seq)
    row = classify(seq).as_row()
    jumps = jump_report(seq)
    interface = required_interface(seq).render()
    document: Dict[str, object] = dict(row)
    document["lloc"] = lloc(seq)
    document["interface"] = interface
    document["jumps"] = [f"{pos} {text} {size}" for pos, text, size in jumps]
    human = [f"LLOC {lloc(seq)}"]
    human += [f"{key}: {value}" for key, value in row.items()]
    human.append(f"interface: {interface}")
    human += [f"jump at {pos}: {text} (size {size})" for pos, text, size in jumps]
    _write(emit(document, args.format, "\n".join(human)))
    return OK


def cmd_run(args) -> int:
    outcome = run(_sequence(args.seq), _family(args.family), trace=args.trace)
    document = {"status": outcome.status, "nos": outcome.nos, "position": outcome.position,
                "cause": outcome.cause}
    human = [outcome.render(), f"NOS {_nos_text(outcome.nos)}"]
    if outcome.terminated:
        document["family"] = render_family(outcome.family).replace("\n", "; ")
        human.append(render_family(outcome.family) or "∅")
    if args.trace:
        document["trace"] = [step.render() for step in outcome.trace]
        human = [step.render() for step in outcome.trace] + human
    _write(emit(document, args.format, "\n".join(human)))
    return OK


def cmd_nos(args) -> int:
    value = run(_sequence(args.seq), _family(args.family)).nos
    _write(emit({"nos": value}, args.format, _nos_text(value)))
    return OK


def cmd_apply(args) -> int:
    outcome = run(_sequence(args.seq), _family(args.family))
    family = outcome.family if outcome.terminated else EMPTY_FAMILY
    rendered = render_family(family)
    _write(emit({"family": rendered.replace("\n", "; ")}, args.format, rendered or "∅"))
    return OK


def cmd_fn(args) -> int:
    seq = _sequence(args.seq)
    layout = _task(args.layout).layout
    table = extract_function(seq, layout, _interface(args.interface))
    profile = nos_profile(seq, layout)
    document = {"rows": [line for line in table.render().splitlines()],
                "nos_worst": profile.worst, "nos_mean": str(profile.mean)}
    _write(emit(document, args.format, f"{table.render()}\nNOS {profile.render()}"))
    return OK


def cmd_equiv(args) -> int:
    layout = _task(args.layout).layout
    same = equivalent(_sequence(args.seq1), _sequence(args.seq2), layout)
    _write(emit({"equivalent": same}, args.format, "equivalent" if same else "not equivalent"))
    return OK if same else NEGATIVE


def cmd_check(args) -> int:
    result = computes(_sequence(args.seq), _task(args.task), _interface(args.interface))
    if result.ok:
        human = "ok"
    elif result.counterexample is not None:
        human = f"fails: {result.counterexample.render()}"
    else:
        human = f"fails: {result.reason}"
    detail = result.counterexample.render() if result.counterexample else result.reason
    _write(emit({"ok": result.ok, "detail": detail}, args.format, human))
    return OK if result.ok else NEGATIVE


def cmd_gen(args) -> int:
    kind = args.kind
    if kind in ("universal", "boundedjump") and not args.task:
        raise IsaError(f"gen {kind} needs --task")
    if kind == "universal":
        produced = gen_universal(_task(args.task))
    elif kind == "boundedjump":
        produced = gen_bounded_jump(_task(args.task))
    elif kind == "copy1d":
        produced = gen_copy1d()
    elif kind == "add":
        produced = GENERATORS[kind](args.n, args.variant or "A", gsc=args.gsc)
    elif kind == "e":
        produced = GENERATORS[kind](args.k, args.variant or "X", verbatim=args.verbatim, gsc=args.gsc)
    elif kind in ("g", "g-short"):
        produced = GENERATORS[kind](args.k, gsc=args.gsc, verbatim=args.verbatim)
    else:
        produced = GENERATORS[kind](args.n, gsc=args.gsc)
    if isinstance(produced, GscSequence):
        document = {"gsc": produced.render(), "lloc_gsc": lloc_gsc(produced)}
    else:
        document = {"program": produced.render(), "lloc": lloc(produced)}
    _write(emit(document, args.format, produced.render()))
    return OK


def cmd_search(args) -> int:
    task = _task(args.task)
    interface = _interface(args.interface) or task.layout.provided_interface()
    constraints = SearchConstraints(
        interface=interface,
        dialect=PGLB if args.pglb else PGA,
        max_lloc=args.max_lloc,
        max_jump=args.max_jump,
        single_visit=args.single_visit,
        only_final_termination=args.final_term_only,
    )
    witnesses = None if args.all_witnesses else config.SEARCH_MAX_WITNESSES
    result = min_lloc(task, constraints, jobs=args.jobs, max_witnesses=witnesses)
    _write(search_report(result, args.format))
    return OK if result.found else NEGATIVE


def cmd_unfold(args) -> int:
    seq = _sequence(args.seq)
    unfolded = unfold_pglb(seq)
    if args.power == "auto":
        if not args.layout:
            raise IsaError("--power auto needs --layout to run the program")
        p = choose_power(seq, _task(args.layout).layout)
    else:
        try:
            p = int(args.power)
        except ValueError:
            raise IsaError(f"--power expects auto or a number, got {args.power!r}") from None
    result = power(unfolded, p)
    document = {"power": p, "lloc": lloc(result), "program": result.render()}
    _write(emit(document, args.format, result.render()))
    return OK


def cmd_compile(args) -> int:
    compiled = compile_pglb_tt(_sequence(args.seq), _task(args.layout).layout)
    dropped = ["".join(map(str, bits)) for bits in compiled.dropped]
    document = {"program": compiled.program.render(), "lloc": lloc(compiled.program), "dropped": dropped}
    _write(emit(document, args.format, compiled.program.render()))
    return OK


def cmd_repro(args) -> int:
    report = run_bundle(args.bundle, jobs=args.jobs)
    _write(repro_report(report, args.format))
    return OK if report.ok else NEGATIVE


# Parser ----------------------------------------------------------------------


def _subparser(sub, name: str, help_text: str, epilog: str = ""):
    return sub.add_parser(name, help=help_text, description=help_text, epilog=epilog,
                          formatter_class=argparse.RawDescriptionHelpFormatter)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=config.DEFAULT_FORMAT,
                        help="human text, tab separated lines, or msgpack records")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug logging")

    parser = argparse.ArgumentParser(
        prog="isa", parents=[common],
        description="Instruction sequences on single bit registers: metrics, runs, generators, minimal search",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=SEQUENCE_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = _subparser(sub, "parse", "parse a sequence and print its canonical form", SEQUENCE_HELP)
    p.add_argument("seq")
    p.add_argument("--gsc", action="store_true", help="accept rep k=1..N { ... } blocks")
    p.set_defaults(handler=cmd_parse)

    p = _subparser(sub, "lloc", "number of instructions", SEQUENCE_HELP)
    p.add_argument("seq")
    p.add_argument("--gsc", action="store_true", help="count repetitions without expanding them")
    p.set_defaults(handler=cmd_lloc)

    p = _subparser(sub, "classify", "syntactic classes, jumps and required interface", SEQUENCE_HELP)
    p.add_argument("seq")
    p.set_defaults(handler=cmd_classify)

    for name, help_text, handler in (("run", "run a sequence on a family", cmd_run),
                                     ("apply", "final family, or the empty family on divergence or error",
                                      cmd_apply)):
        p = _subparser(sub, name, help_text, f"{SEQUENCE_HELP}\n\n{FAMILY_HELP}")
        p.add_argument("seq")
        p.add_argument("--family", help="family literal or file; empty when omitted")
        if name == "run":
            p.add_argument("--trace", action="store_true", help="one line per step: position, instruction, reply")
        p.set_defaults(handler=handler)

    p = _subparser(sub, "nos", "number of steps, inf on divergence or error", f"{SEQUENCE_HELP}\n\n{FAMILY_HELP}")
    p.add_argument("--seq", required=True)
    p.add_argument("--family")
    p.set_defaults(handler=cmd_nos)

    p = _subparser(sub, "fn", "function table and NOS profile over a layout", f"{SEQUENCE_HELP}\n\n{TASK_HELP}")
    p.add_argument("seq")
    p.add_argument("--layout", required=True, help="task file; only its layout is used")
    p.add_argument("--interface", help=INTERFACE_HELP.splitlines()[0])
    p.set_defaults(handler=cmd_fn)

    p = _subparser(sub, "equiv", "same function over a layout (exit 1 if not)", TASK_HELP)
    p.add_argument("seq1")
    p.add_argument("seq2")
    p.add_argument("--layout", required=True)
    p.set_defaults(handler=cmd_equiv)

    p = _subparser(sub, "check", "does a sequence compute a task (exit 1 if not)", f"{TASK_HELP}\n\n{INTERFACE_HELP}")
    p.add_argument("seq")
    p.add_argument("--task", required=True)
    p.add_argument("--interface")
    p.set_defaults(handler=cmd_check)

    p = _subparser(sub, "gen", "emit a generated sequence",
                   "examples:\n  gen paris0 --n 4\n  gen add --n 3 --variant A2\n  gen e --k 2 --variant Y\n"
                   "  gen universal --task f.task\n  gen boundedjump --task f.task\n  gen copy1d\n\n" + TASK_HELP)
    p.add_argument("kind", choices=sorted(GENERATORS) + ["universal", "boundedjump", "copy1d"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--variant", help=f"adder {'/'.join(ADD_VARIANTS)} or example e {'/'.join(E_VARIANTS)}")
    p.add_argument("--verbatim", action="store_true", help="emit the displayed form instead of the repaired one")
    p.add_argument("--gsc", action="store_true", help="keep repetitions folded")
    p.add_argument("--task")
    p.set_defaults(handler=cmd_gen)

    p = _subparser(sub, "search", "shortest sequence computing a task (exit 1 if none up to the bound)",
                   f"{TASK_HELP}\n\n{INTERFACE_HELP}")
    p.add_argument("--task", required=True)
    p.add_argument("--interface", help="defaults to M16 on every focus of the layout")
    p.add_argument("--max-lloc", type=int, default=config.SEARCH_MAX_LLOC)
    p.add_argument("--pglb", action="store_true", help="allow backward jumps")
    p.add_argument("--max-jump", type=int)
    p.add_argument("--single-visit", action="store_true")
    p.add_argument("--final-term-only", action="store_true")
    p.add_argument("--jobs", type=int, default=config.SEARCH_JOBS)
    p.add_argument("--all-witnesses", action="store_true")
    p.set_defaults(handler=cmd_search)

    p = _subparser(sub, "unfold", "replace backward jumps by chained copies", f"{SEQUENCE_HELP}\n\n{TASK_HELP}")
    p.add_argument("--in", dest="seq", required=True)
    p.add_argument("--power", default="auto", help="auto or a number of copies")
    p.add_argument("--layout", help="task file used by --power auto")
    p.set_defaults(handler=cmd_unfold)

    p = _subparser(sub, "compile", "tabulate a PGLB sequence and emit the universal construction", TASK_HELP)
    p.add_argument("seq")
    p.add_argument("--layout", required=True)
    p.set_defaults(handler=cmd_compile)

    p = _subparser(sub, "repro", "run an acceptance bundle, PASS/FAIL per claim (exit 1 on FAIL)",
                   "bundles:\n" + "\n".join(f"  {name:18} {text}" for name, (text, _) in BUNDLES.items())
                   + "\n\naliases:\n" + "\n".join(f"  {alias:18} {name}" for alias, name in ALIASES.items()))
    p.add_argument("bundle")
    p.add_argument("--jobs", type=int, default=config.SEARCH_JOBS)
    p.set_defaults(handler=cmd_repro)

    # flags shared by every subcommand may follow it too
    for choice in sub.choices.values():
        choice.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
        choice.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    return parser


def main(argv: List[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(shield_programs(argv))
    except SystemExit as e:
        return USAGE if e.code else OK
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG if args.verbose > 1 else logging.INFO)
    try:
        return args.handler(args)
    except IsaError as e:
        logger.debug("input error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
