"""
Generators - Constructors for parity, addition, universal and example instruction sequences
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import config
from errors import GeneratorError, UnfoldError
from execution import run
from function_tables import (
    Bits, RegisterLayout, TaskSpec, Undefined,
    bit_vectors, complement_task, e_layout, extract_function, foci, initial_family,
)
from isa.instructions import (
    INDEX_BIT, PGA, PLAIN, POS, NEG, TERMINATE,
    Basic, BackwardJump, Focus, ForwardJump, Instruction, InstructionSequence, Method,
)
from isa.metrics import lloc, max_jump_size, required_interface
from isa.syntax import GscSequence, expand_gsc, parse, parse_gsc
from services.interface import BasicActionInterface, parse_interface

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Repair:
    """One edit between a published display and the sequence a generator emits"""
    generator: str
    location: str
    before: str
    after: str
    reason: str


REPAIR_LOG: Tuple[Repair, ...] = (
    Repair("complementation_suite", "X_2 position 1", "+in:1.i/i", "-in:1.i/i",
           "with the positive test the write runs on input 1, computing the identity"),
    Repair("complementation_suite", "X_3 position 1", "+in:1.i/i", "-in:1.i/i",
           "with the positive test input 0 reaches out:1.0/0, computing the identity"),
    Repair("complementation_suite", "X_4 position 1", "+inout:1.i/i", "-inout:1.i/i",
           "with the positive test input 0 reaches inout:1.1/0, computing the identity"),
    Repair("complementation_suite", "X_5 position 2", "out0:1.0/c", "out0:1.1/c",
           "out0:1.0/c is outside I_5 = in:1.{c/0} + out0:1.{1/c}"),
    Repair("gen_example_g", "position 1", "-in:1.i/i", "+in:1.i/i",
           "input 0 must set out0:1..k; the negative test selects out0:k+1..2k"),
    Repair("gen_example_g_short", "position 1", "+in:1.i/i", "-in:1.i/i",
           "input 0 must set out0:1..k; the positive test selects out0:k+1..2k"),
    Repair("gen_example_e", "Y blocks 2..k", "#3;+inout_a:l.i/c;-out0_a:l.1/1",
           "-inout:1.i/i;#3;+inout_a:l.i/c;out0_a:l.1/1",
           "an a-input equal to 0 lands on the next #3; routing through inout:1 keeps jumps at 3"),
    Repair("gen_add", "A3 foci", "out0:i/c", "out0:k.i/c",
           "the display omits the focus index; bit k is out0:k with the carry in out0:k+1"),
    Repair("gen_add", "A3 block k", "out0:(n+1).i/c", "out0:(k+1).i/c",
           "the carry of bit k goes to out0:k+1, not the high bit"),
    Repair("gen_universal", "base case", "out0:1.1/d_k", "out0:k.1/d_k",
           "a single focus cannot hold m distinct outputs"),
    Repair("gen_copy1d", "position 3", "out1D:7.1/c", "out1D0:7.a1:1/c",
           "the destination index bit must advance; out1D lacks its initialisation digit"),
)


def _rep(count: int, body: str) -> str:
    return f"rep k=1..{count} {{ {body} }};" if count > 0 else ""


def _emit(text: str, gsc: bool) -> Union[InstructionSequence, GscSequence]:
    g = parse_gsc(text)
    return g if gsc else expand_gsc(g)


# Universal construction ------------------------------------------------------


def l(n: int, m: int) -> int:
    """l(0,m) = m+1, l(n+1,m) = 2 l(n,m) + 2; equals 2**n (m+3) - 2"""
    if m < 1:
        raise GeneratorError("l(n, m) needs m > 0")
    if n < 0:
        raise GeneratorError("l(n, m) needs n >= 0")
    return 2 ** n * (m + 3) - 2


def l_recursive(n: int, m: int) -> int:
    if m < 1:
        raise GeneratorError("l(n, m) needs m > 0")
    return m + 1 if n == 0 else 2 * l_recursive(n - 1, m) + 2


def _slots(foci_: Sequence[Focus]) -> List[Tuple[Focus, int]]:
    return [(f, cell) for f in foci_ for cell in ((0, 1) if f.array else (0,))]


def _select(focus: Focus, cell: int) -> List[Instruction]:
    """Point an array's index bit at a cell"""
    if not focus.array:
        return []
    return [Basic(focus, Method("0", str(cell), INDEX_BIT))]


def _reader(focus: Focus, cell: int, polarity: str = POS, code: str = "i") -> List[Instruction]:
    return _select(focus, cell) + [Basic(focus, Method(code, "i"), polarity)]


def _writer(focus: Focus, cell: int, bit: int) -> List[Instruction]:
    return _select(focus, cell) + [Basic(focus, Method("1", str(bit)))]


def _outputs_for(task: TaskSpec, inputs: Bits) -> Bits:
    return task.table.get(inputs, (0,) * task.layout.n_outputs)


def _constant_block(task: TaskSpec, inputs: Bits) -> List[Instruction]:
    writes: List[Instruction] = []
    for (focus, cell), bit in zip(_slots(task.layout.outputs), _outputs_for(task, inputs)):
        writes.extend(_writer(focus, cell, bit))
    return writes + [TERMINATE]


def gen_universal(task: TaskSpec) -> InstructionSequence:
    """
    Split on the last input: +in:(n+1).i/i;#(l(n)+1);X_0;X_1, down to
    blocks of constant writes; inputs missing from a partial table get 0s
    """
    if task.layout.n_outputs < 1:
        raise GeneratorError("the universal construction needs at least one output")
    slots = _slots(task.layout.inputs)

    def build(n: int, suffix: Bits) -> List[Instruction]:
        if n == 0:
            return _constant_block(task, suffix)
        x0 = build(n - 1, (0,) + suffix)
        x1 = build(n - 1, (1,) + suffix)
        return _reader(*slots[n - 1]) + [ForwardJump(len(x0) + 1)] + x0 + x1

    return InstructionSequence(tuple(build(len(slots), ())), PGA)


def gen_bounded_jump(task: TaskSpec) -> InstructionSequence:
    """
    One block per input vector alpha: -in:j.(i|c)/i;#2 per input, then
    +out0:i.0/F_i(alpha);#2 per output and !. A mismatch rides the #2 chain
    into the next block; all jumps have size 2
    """
    layout = task.layout
    if any(f.array for f in layout.inputs + layout.outputs):
        raise GeneratorError("bounded jump blocks need scalar registers")
    if layout.n_inputs == 0:
        return InstructionSequence(tuple(_constant_block(task, ())), PGA)
    instrs: List[Instruction] = []
    for alpha in bit_vectors(layout.n_inputs):
        for focus, bit in zip(layout.inputs, alpha):
            instrs += [Basic(focus, Method("i" if bit else "c", "i"), NEG), ForwardJump(2)]
        for focus, bit in zip(layout.outputs, _outputs_for(task, alpha)):
            instrs += [Basic(focus, Method("0", str(bit)), POS), ForwardJump(2)]
        instrs.append(TERMINATE)
    instrs.append(TERMINATE)
    return InstructionSequence(tuple(instrs), PGA)


# Parity ----------------------------------------------------------------------


def gen_paris0(n: int, gsc: bool = False):
    """Two state chain over in:1..n, LLOC 5n-2"""
    if n < 0:
        raise GeneratorError("parity needs n >= 0")
    if n == 0:
        return _emit("!", gsc)
    return _emit("+in:1.i/i;"
                 + _rep(n - 1, "#4;+in:k+1.i/i;#3;#3;-in:k+1.i/i")
                 + "out0:1.1/1;!", gsc)


def gen_paris1(n: int, gsc: bool = False):
    """Accumulate in aux0:1, LLOC 2n+3 for n > 1"""
    if n < 0:
        raise GeneratorError("parity needs n >= 0")
    if n <= 1:
        return gen_paris0(n, gsc)
    return _emit(_rep(n, "+in:k.i/i;aux0:1.i/c") + "+aux0:1.i/i;out0:1.1/1;!", gsc)


# Addition --------------------------------------------------------------------

ADD_VARIANTS = ("A", "A1", "A2", "A3")

_ADD_BLOCK = ("+in_a:{k}.i/i;-in_b:{k}.i/i;#4;+{c}.i/1;#9;#9;"
              "-in_a:{k}.i/i;+in_b:{k}.i/i;#4;+{c}.i/0;#3;#3;"
              "-{c}.i/i;out0:{k}.1/1")


def gen_add(n: int, variant: str = "A", gsc: bool = False):
    """
    n bit addition with carry out; in_a:k, in_b:k are bit k-1, out0:(n+1) the high bit

    A   carry in aux0:1, LLOC 14n+3
    A1  carry in out0:(n+1), LLOC 14n+1
    A2  A1 with a shortened first block, LLOC 14n-5
    A3  complementing updates without a carry register, LLOC 8n-1
    """
    if n < 1:
        raise GeneratorError("addition needs n >= 1")
    if variant not in ADD_VARIANTS:
        raise GeneratorError(f"unknown adder variant {variant!r}")
    high = f"out0:{n + 1}"
    if variant == "A":
        text = _rep(n, _ADD_BLOCK.format(k="k", c="aux0:1")) + f"+aux0:1.i/0;{high}.1/1;!"
    elif variant == "A1":
        text = _rep(n, _ADD_BLOCK.format(k="k", c=high)) + "!"
    elif variant == "A2":
        text = (f"+in_a:1.i/i;-in_b:1.i/i;#3;{high}.i/1;#4;-in_a:1.i/i;+in_b:1.i/i;out0:1.1/1;"
                + _rep(n - 1, _ADD_BLOCK.format(k="k+1", c=high)) + "!")
    else:
        logger.info("🧬 emitting the repaired A3 adder")
        text = ("+in_a:1.i/i;out0:1.i/c;-in_b:1.i/i;#3;+out0:1.i/c;out0:2.i/c;"
                + _rep(n - 1, "-in_a:k+1.i/i;#3;+out0:k+1.i/c;out0:k+2.i/c;"
                              "-in_b:k+1.i/i;#3;+out0:k+1.i/c;out0:k+2.i/c")
                + "!")
    return _emit(text, gsc)


def _summands(n: int) -> BasicActionInterface:
    entries = {f: {Method("i", "i")} for f in foci("in", range(1, n + 1), "_a") + foci("in", range(1, n + 1), "_b")}
    return BasicActionInterface.of(entries)


def adder_interface(n: int, variant: str = "A") -> BasicActionInterface:
    """Interface the adder variant is written against"""
    high = Focus("out0", n + 1)
    writes = BasicActionInterface.of({f: {Method("1", "1")} for f in foci("out0", range(1, n + 1))})
    if variant == "A":
        carry = {Method("i", "0"), Method("i", "1"), Method("i", "i")}
        return (_summands(n) + writes + BasicActionInterface.single(high, {Method("1", "1")})
                + BasicActionInterface.single(Focus("aux0", 1), carry))
    if variant in ("A1", "A2"):
        return _summands(n) + writes + BasicActionInterface.single(
            high, {Method("i", "i"), Method("i", "1"), Method("i", "0")})
    if variant == "A3":
        flips = BasicActionInterface.of({f: {Method("i", "c")} for f in foci("out0", range(1, n + 2))})
        return _summands(n) + flips + BasicActionInterface.single(high, {Method("i", "0")})
    raise GeneratorError(f"unknown adder variant {variant!r}")


# Examples with large and small jumps -----------------------------------------


def gen_example_g(k: int, gsc: bool = False, verbatim: bool = False):
    """Fan out with one jump of size k+2, LLOC 2k+4"""
    if k < 1:
        raise GeneratorError("G needs k >= 1")
    first = "-in:1.i/i" if verbatim else "+in:1.i/i"
    return _emit(f"{first};#{k + 2};" + _rep(k, "out0:k.1/1") + "!;"
                 + _rep(k, f"out0:k+{k}.1/1") + "!", gsc)


def gen_example_g_short(k: int, gsc: bool = False, verbatim: bool = False):
    """Interleaved negative tests without jumps, LLOC 2k+2"""
    if k < 1:
        raise GeneratorError("G needs k >= 1")
    first = "+in:1.i/i" if verbatim else "-in:1.i/i"
    return _emit(f"{first};" + _rep(k - 1, f"-out0:k.1/1;-out0:k+{k}.1/1")
                 + f"-out0:{k}.1/1;out0:{2 * k}.1/1;!", gsc)


def example_g_interface(k: int) -> BasicActionInterface:
    return required_interface(gen_example_g_short(k))


E_VARIANTS = ("X", "Y")


def gen_example_e(k: int, variant: str = "X", verbatim: bool = False, gsc: bool = False):
    """
    X: +inout:1.i/c;#2k+2 then the a blocks, !, the b blocks, !; LLOC 4k+4.
    Y keeps every jump at most 3: the display has LLOC 5k+4 but is not
    equivalent to X, the emitted form routes through inout:1 (LLOC 6k+3)
    """
    if k < 1:
        raise GeneratorError("E needs k >= 1")
    if variant not in E_VARIANTS:
        raise GeneratorError(f"unknown variant {variant!r}")
    b_blocks = _rep(k, "+inout_b:k.i/c;out0_b:k.1/1") + "!"
    if variant == "X":
        text = f"+inout:1.i/c;#{2 * k + 2};" + _rep(k, "+inout_a:k.i/c;out0_a:k.1/1") + "!;" + b_blocks
    elif verbatim:
        text = "+inout:1.i/c;" + _rep(k, "#3;+inout_a:k.i/c;-out0_a:k.1/1") + "#2;!;" + b_blocks
    else:
        text = ("+inout:1.i/c;#3;+inout_a:1.i/c;out0_a:1.1/1;"
                + _rep(k - 1, "-inout:1.i/i;#3;+inout_a:k+1.i/c;out0_a:k+1.1/1")
                + "+inout:1.i/i;!;" + b_blocks)
    return _emit(text, gsc)


def e_task(k: int) -> TaskSpec:
    """E^k is whatever X_E^k computes"""
    layout = e_layout(k)
    table = extract_function(gen_example_e(k, "X"), layout).defined()
    return TaskSpec(layout, table, f"E{k}")


def example_e_interface(k: int) -> BasicActionInterface:
    return required_interface(gen_example_e(k, "X"))


@dataclass(frozen=True)
class LargeJumpReport:
    within_interface: bool
    same_function: bool
    lloc_bounded: bool
    final_termination_only: bool
    max_jump: int
    k: int

    @property
    def conditions_met(self) -> bool:
        return self.within_interface and self.same_function and self.lloc_bounded and self.final_termination_only

    @property
    def has_large_jump(self) -> bool:
        return 2 * self.max_jump >= self.k

    @property
    def consistent(self) -> bool:
        """Meeting all four conditions forces a jump of size k/2 or more"""
        return not self.conditions_met or self.has_large_jump


def large_jump_conditions(seq: InstructionSequence, k: int) -> LargeJumpReport:
    """Check a single pass candidate against X_E^k's interface, function, LLOC and termination shape"""
    reference = gen_example_e(k, "X")
    layout = e_layout(k)
    within = required_interface(seq).is_subinterface(required_interface(reference))
    same = within and extract_function(seq, layout) == extract_function(reference, layout)
    terms = [pos for pos, u in enumerate(seq, start=1) if u == TERMINATE]
    return LargeJumpReport(
        within_interface=within,
        same_function=same,
        lloc_bounded=lloc(seq) <= lloc(reference),
        final_termination_only=terms == [len(seq)],
        max_jump=max_jump_size(seq),
        k=k,
    )


# Arrays ----------------------------------------------------------------------


def gen_copy1d() -> InstructionSequence:
    """Copy in1D:3 to out1D0:7 with one backward jump, LLOC 6"""
    return parse("+in1D:3.i/i;out1D0:7.1/1;out1D0:7.a1:1/c;+in1D:3.a1:i/c;!;\\#5")


# Complementation -------------------------------------------------------------


@dataclass(frozen=True)
class ComplementCase:
    name: str
    interface: BasicActionInterface
    layout: RegisterLayout
    printed: InstructionSequence
    program: InstructionSequence
    min_lloc: int

    @property
    def task(self) -> TaskSpec:
        return complement_task(self.layout)

    @property
    def repaired(self) -> bool:
        return self.printed != self.program


_IN = (Focus("in", 1),)
_INOUT = (Focus("inout", 1),)

_COMPLEMENT_CASES = (
    ("X_1", "inout:1.M16", _INOUT, _INOUT, "inout:1.1/c;!", None, 2),
    ("X_2", "in:1.M16 + out0:1.M16", _IN, (Focus("out0", 1),),
     "+in:1.i/i;out0:1.1/1;!", "-in:1.i/i;out0:1.1/1;!", 3),
    ("X_3", "in:1.M16 + out:1.M16", _IN, (Focus("out", 1),),
     "+in:1.i/i;+out:1.0/1;out:1.0/0;!", "-in:1.i/i;+out:1.0/1;out:1.0/0;!", 4),
    ("X_4", "inout:1.{i/i,1/1,1/0}", _INOUT, _INOUT,
     "+inout:1.i/i;-inout:1.1/1;inout:1.1/0;!", "-inout:1.i/i;-inout:1.1/1;inout:1.1/0;!", 4),
    ("X_5", "in:1.{c/0} + out0:1.{1/c}", _IN, (Focus("out0", 1),),
     "+in:1.c/0;out0:1.0/c;!", "+in:1.c/0;out0:1.1/c;!", 3),
    ("X_6", "in:1.{i/i} + out:1.{i/0,i/1}", _IN, (Focus("out", 1),),
     "out:1.i/0;-in:1.i/i;out:1.i/1;!", None, 4),
    ("X_7", "in:1.{i/i} + out:1.{i/c}", _IN, (Focus("out", 1),),
     "-out:1.i/c;out:1.i/c;-in:1.i/i;out:1.i/c;!", None, 5),
)


def complementation_suite() -> Tuple[ComplementCase, ...]:
    """Seven ways to complement one bit under shrinking interfaces"""
    cases = []
    for name, interface, inputs, outputs, printed, fixed, minimum in _COMPLEMENT_CASES:
        cases.append(ComplementCase(
            name=name,
            interface=parse_interface(interface),
            layout=RegisterLayout(inputs, outputs),
            printed=parse(printed),
            program=parse(fixed or printed),
            min_lloc=minimum,
        ))
    return tuple(cases)


def alternative_initialisation() -> Dict[str, Tuple[BasicActionInterface, RegisterLayout, int]]:
    """Constant 0 over out0:1 costs one instruction, over out1:1 two"""
    return {
        "J": (parse_interface("in:1.{i/i} + out0:1.{1/1}"), RegisterLayout(_IN, (Focus("out0", 1),)), 1),
        "J'": (parse_interface("in:1.{i/i} + out1:1.{0/0}"), RegisterLayout(_IN, (Focus("out1", 1),)), 2),
    }


# Backward jump elimination ---------------------------------------------------


def unfold_pglb(seq: InstructionSequence) -> InstructionSequence:
    """
    Rewrite jumps so that copies of the result chain together: \\#k at
    position i > k becomes #(n-k), landing in the next copy; jumps
    leaving the sequence become #0
    """
    n = len(seq)
    instrs = []
    for i, u in enumerate(seq, start=1):
        if isinstance(u, ForwardJump) and i + u.counter > n:
            u = ForwardJump(0)
        elif isinstance(u, BackwardJump):
            u = ForwardJump(0) if u.counter >= i else ForwardJump(n - u.counter)
        instrs.append(u)
    return InstructionSequence(tuple(instrs), PGA)


def power(seq: InstructionSequence, p: int) -> InstructionSequence:
    if p < 1:
        raise GeneratorError("power needs p >= 1")
    return InstructionSequence(seq.instrs * p, seq.dialect)


def choose_power(seq: InstructionSequence, layout: RegisterLayout) -> int:
    """
    Copies needed so every terminating run fits: backward jumps taken plus
    one, maximised over inputs and initialisations
    """
    needed = []
    for inputs in bit_vectors(layout.n_inputs):
        for choice in bit_vectors(layout.n_arbitrary):
            outcome = run(seq, initial_family(layout, inputs, choice), trace=True)
            if outcome.terminated:
                jumps = sum(isinstance(step.instruction, BackwardJump) for step in outcome.trace)
                needed.append(jumps + 1)
    if not needed:
        raise UnfoldError("no input terminates, so no power of the unfolding is equivalent")
    p = max(needed) + config.UNFOLD_EXTRA_COPIES
    logger.debug(f"🧬 unfolding power {p} for LLOC {len(seq)}")
    return p


def nos_power_bound(seq: InstructionSequence, layout: RegisterLayout) -> int:
    """ceil(max terminating NOS / LLOC) + 1"""
    worst = 0
    for inputs in bit_vectors(layout.n_inputs):
        for choice in bit_vectors(layout.n_arbitrary):
            outcome = run(seq, initial_family(layout, inputs, choice))
            if outcome.terminated:
                worst = max(worst, outcome.steps)
    if not worst:
        raise UnfoldError("no input terminates")
    return math.ceil(worst / len(seq)) + 1


@dataclass(frozen=True)
class CompileResult:
    program: InstructionSequence
    dropped: Tuple[Bits, ...]   # inputs on which the source diverged or failed


def compile_pglb_tt(seq: InstructionSequence, layout: RegisterLayout) -> CompileResult:
    """Tabulate the source on every input, then emit the universal construction"""
    table = extract_function(seq, layout)
    defined = table.defined()
    dropped = tuple(k for k, v in table if isinstance(v, Undefined))
    for inputs in dropped:
        logger.warning(f"⚠️ input {''.join(map(str, inputs))} dropped: {table[inputs].render()}")
    return CompileResult(gen_universal(TaskSpec(layout, defined)), dropped)


def random_pglb(rng, length: int, layout: RegisterLayout) -> InstructionSequence:
    """Seeded random program over the layout's scalar foci; numpy Generator rng"""
    scalars = [f for f in layout.foci() if not f.array]
    letters: List[Instruction] = [TERMINATE]
    letters += [ForwardJump(k) for k in range(1, length)]
    letters += [BackwardJump(k) for k in range(1, length)]
    instrs = []
    for _ in range(length):
        kind = rng.integers(0, 3)
        if kind < 2 and scalars:
            focus = scalars[rng.integers(0, len(scalars))]
            method = Method("01ic"[rng.integers(0, 4)], "01ic"[rng.integers(0, 4)])
            instrs.append(Basic(focus, method, (PLAIN, POS, NEG)[rng.integers(0, 3)]))
        else:
            instrs.append(letters[rng.integers(0, len(letters))])
    return InstructionSequence.of(instrs)


def terminates_everywhere(seq: InstructionSequence, layout: RegisterLayout) -> bool:
    return all(run(seq, initial_family(layout, inputs, choice)).terminated
               for inputs in bit_vectors(layout.n_inputs)
               for choice in bit_vectors(layout.n_arbitrary))


GENERATORS = {
    "paris0": gen_paris0,
    "paris1": gen_paris1,
    "add": gen_add,
    "g": gen_example_g,
    "g-short": gen_example_g_short,
    "e": gen_example_e,
}
