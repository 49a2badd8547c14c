"""
Function Tables - Register layouts, truth table extraction, task checking
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import InterfaceViolation, LayoutError, ParseError
from execution import ERROR, run
from isa.instructions import A16, M16, Focus, InstructionSequence, Method
from isa.metrics import required_interface
from isa.syntax import parse_focus, strip_comments
from services.family import ServiceFamily, restrict
from services.interface import BasicActionInterface
from services.kernels import Array1DKernel, RegisterKernel

logger = logging.getLogger(__name__)

Bits = Tuple[int, ...]

INPUT_ROLES = ("in", "inout")
OUTPUT_ROLES = ("out0", "out1", "out", "inout")
AUX_ROLES = ("aux0", "aux1")


def _width(focus: Focus) -> int:
    return 2 if focus.array else 1


@dataclass(frozen=True)
class RegisterLayout:
    """
    Where inputs are placed and outputs read; an inout focus may be both
    an input and an output, 1D arrays carry two bits (cell0, cell1)
    """
    inputs: Tuple[Focus, ...] = ()
    outputs: Tuple[Focus, ...] = ()
    auxiliaries: Tuple[Focus, ...] = ()

    def __post_init__(self):
        for name in ("inputs", "outputs", "auxiliaries"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for name, foci, roles in (("input", self.inputs, INPUT_ROLES),
                                  ("output", self.outputs, OUTPUT_ROLES),
                                  ("auxiliary", self.auxiliaries, AUX_ROLES)):
            if len(set(foci)) != len(foci):
                raise LayoutError(f"duplicate {name} focus")
            for focus in foci:
                if focus.role not in roles:
                    raise LayoutError(f"{focus} cannot serve as an {name}")
        shared = set(self.inputs) & set(self.outputs)
        if any(f.role != "inout" for f in shared):
            raise LayoutError("only inout foci may be both input and output")
        if set(self.auxiliaries) & (set(self.inputs) | set(self.outputs)):
            raise LayoutError("auxiliary focus also declared as input or output")

    @property
    def n_inputs(self) -> int:
        return sum(_width(f) for f in self.inputs)

    @property
    def n_outputs(self) -> int:
        return sum(_width(f) for f in self.outputs)

    @property
    def arbitrary(self) -> Tuple[Focus, ...]:
        """Outputs with role out, whose initial content is unknown"""
        return tuple(f for f in self.outputs if f.role == "out")

    @property
    def n_arbitrary(self) -> int:
        return sum(_width(f) for f in self.arbitrary)

    def foci(self) -> Tuple[Focus, ...]:
        seen = dict.fromkeys(self.inputs + self.outputs + self.auxiliaries)
        return tuple(seen)

    def provided_interface(self) -> BasicActionInterface:
        return BasicActionInterface.of({f: (M16 + A16) if f.array else M16 for f in self.foci()})

    def render(self) -> str:
        lines = ["inputs: " + " ".join(f.render() for f in self.inputs),
                 "outputs: " + " ".join(f.render() for f in self.outputs)]
        if self.auxiliaries:
            lines.append("aux: " + " ".join(f.render() for f in self.auxiliaries))
        return "\n".join(lines)


def input_vectors(n: int) -> np.ndarray:
    """(2**n, n) bit matrix in lexicographic order; column 0 is b_1"""
    rows = np.arange(2 ** n, dtype=np.int64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((rows >> shifts) & 1).astype(np.uint8)


def bit_vectors(n: int) -> List[Bits]:
    return [tuple(int(b) for b in row) for row in input_vectors(n)]


def _kernel(focus: Focus, bits: Sequence[int], index_bit: int = 0):
    if focus.array:
        return Array1DKernel(index_bit, int(bits[0]), int(bits[1]))
    return RegisterKernel(int(bits[0]))


def _fixed_bits(focus: Focus) -> List[int]:
    return [int(focus.init_digit)] * _width(focus)


def initial_family(layout: RegisterLayout, inputs: Sequence[int],
                   arbitrary: Sequence[int] = (), index_bit: int = 0) -> ServiceFamily:
    """Bind every declared focus to its initialised kernel"""
    if len(inputs) != layout.n_inputs:
        raise LayoutError(f"expected {layout.n_inputs} input bits, got {len(inputs)}")
    if len(arbitrary) != layout.n_arbitrary:
        raise LayoutError(f"expected {layout.n_arbitrary} arbitrary bits, got {len(arbitrary)}")
    bindings = {}
    pos = 0
    for focus in layout.inputs:
        bindings[focus] = _kernel(focus, inputs[pos:pos + _width(focus)], index_bit)
        pos += _width(focus)
    pos = 0
    for focus in layout.outputs:
        if focus in bindings:
            continue
        if focus.role == "out":
            bits = arbitrary[pos:pos + _width(focus)]
            pos += _width(focus)
        else:
            bits = _fixed_bits(focus)
        bindings[focus] = _kernel(focus, bits)
    for focus in layout.auxiliaries:
        bindings[focus] = _kernel(focus, _fixed_bits(focus))
    return ServiceFamily(bindings)


def read_outputs(layout: RegisterLayout, family: ServiceFamily) -> Bits:
    """Output bits after forgetting inputs and auxiliaries (inout foci kept)"""
    dropped = [f for f in layout.inputs + layout.auxiliaries if f.role != "inout"]
    visible = restrict(dropped, family)
    bits: List[int] = []
    for focus in layout.outputs:
        kernel = visible[focus]
        bits.extend(kernel.cells if focus.array else (kernel.content,))
    return tuple(bits)


@dataclass(frozen=True)
class Undefined:
    kind: str   # diverged | error | inconsistent

    def render(self) -> str:
        return f"undefined({self.kind})"


Result = Union[Bits, Undefined]


def _render_bits(bits: Bits) -> str:
    return "".join(str(b) for b in bits)


@dataclass(frozen=True)
class FunctionTable:
    """Total map from every input vector to outputs or Undefined"""
    rows: Tuple[Tuple[Bits, Result], ...]

    def as_dict(self) -> Dict[Bits, Result]:
        return dict(self.rows)

    def __getitem__(self, inputs: Bits) -> Result:
        return self.as_dict()[tuple(inputs)]

    def __iter__(self):
        return iter(self.rows)

    def defined(self) -> Dict[Bits, Bits]:
        return {k: v for k, v in self.rows if not isinstance(v, Undefined)}

    def render(self) -> str:
        return "\n".join(f"{_render_bits(k)} -> {v.render() if isinstance(v, Undefined) else _render_bits(v)}"
                         for k, v in self.rows)


@dataclass(frozen=True)
class TaskSpec:
    """A layout and a partial table; missing inputs are unconstrained"""
    layout: RegisterLayout
    table: Dict[Bits, Bits] = field(default_factory=dict, hash=False)
    name: str = ""

    def __post_init__(self):
        for inputs, outputs in self.table.items():
            if len(inputs) != self.layout.n_inputs or len(outputs) != self.layout.n_outputs:
                raise LayoutError(f"table row {inputs} -> {outputs} does not fit the layout")

    @property
    def is_total(self) -> bool:
        return len(self.table) == 2 ** self.layout.n_inputs

    def render(self) -> str:
        lines = [self.layout.render()]
        lines.extend(f"{_render_bits(k)} -> {_render_bits(v)}" for k, v in sorted(self.table.items()))
        return "\n".join(lines) + "\n"


def check_interface(seq: InstructionSequence, layout: RegisterLayout,
                    interface: Optional[BasicActionInterface] = None):
    provided = interface if interface is not None else layout.provided_interface()
    required = required_interface(seq)
    if not required.is_subinterface(provided):
        raise InterfaceViolation(f"{required.render()} is not within {provided.render()}")


def _outcomes(seq: InstructionSequence, layout: RegisterLayout, inputs: Bits, index_bit: int = 0):
    for choice in bit_vectors(layout.n_arbitrary):
        outcome = run(seq, initial_family(layout, inputs, choice, index_bit))
        if outcome.terminated:
            yield choice, read_outputs(layout, outcome.family), outcome
        else:
            yield choice, Undefined("error" if outcome.status == ERROR else "diverged"), outcome


def extract_function(seq: InstructionSequence, layout: RegisterLayout,
                     interface: Optional[BasicActionInterface] = None,
                     index_bit: int = 0) -> FunctionTable:
    """
    Run every input vector under every arbitrary initialisation; an
    input whose results differ across initialisations is inconsistent
    """
    check_interface(seq, layout, interface)
    return _tabulate(seq, layout, index_bit)


def _tabulate(seq: InstructionSequence, layout: RegisterLayout, index_bit: int = 0) -> FunctionTable:
    rows = []
    for inputs in bit_vectors(layout.n_inputs):
        results = {result for _, result, _ in _outcomes(seq, layout, inputs, index_bit)}
        rows.append((inputs, results.pop() if len(results) == 1 else Undefined("inconsistent")))
    return FunctionTable(tuple(rows))


@dataclass(frozen=True)
class Counterexample:
    inputs: Bits
    arbitrary: Bits
    expected: Bits
    got: Result

    def render(self) -> str:
        got = self.got.render() if isinstance(self.got, Undefined) else _render_bits(self.got)
        init = f" (initial outputs {_render_bits(self.arbitrary)})" if self.arbitrary else ""
        return f"input {_render_bits(self.inputs)}{init}: expected {_render_bits(self.expected)}, got {got}"


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    counterexample: Optional[Counterexample] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def computes(seq: InstructionSequence, task: TaskSpec,
             interface: Optional[BasicActionInterface] = None, index_bit: int = 0) -> CheckResult:
    """Every defined entry, under every arbitrary initialisation, terminates with the expected outputs"""
    try:
        check_interface(seq, task.layout, interface)
    except InterfaceViolation as e:
        return CheckResult(False, reason=str(e))
    for inputs, expected in sorted(task.table.items()):
        for choice, result, _ in _outcomes(seq, task.layout, inputs, index_bit):
            if result != expected:
                return CheckResult(False, Counterexample(inputs, choice, expected, result))
    return CheckResult(True)


def equivalent(seq1: InstructionSequence, seq2: InstructionSequence, layout: RegisterLayout) -> bool:
    """Same table over the layout; a focus outside it makes the affected rows errors"""
    return _tabulate(seq1, layout) == _tabulate(seq2, layout)


@dataclass(frozen=True)
class NosProfile:
    worst: Union[int, float]
    mean: Union[Fraction, float]
    per_input: Tuple[Tuple[Bits, Union[int, float]], ...] = ()

    def render(self) -> str:
        return f"worst {self.worst}, mean {self.mean}"


def nos_profile(seq: InstructionSequence, layout: RegisterLayout) -> NosProfile:
    """Worst case over inputs and initialisations; mean over inputs of the per input worst case"""
    per_input = []
    for inputs in bit_vectors(layout.n_inputs):
        worst = max(outcome.nos for _, _, outcome in _outcomes(seq, layout, inputs))
        per_input.append((inputs, worst))
    values = [w for _, w in per_input]
    if any(math.isinf(w) for w in values):
        return NosProfile(math.inf, math.inf, tuple(per_input))
    return NosProfile(max(values), Fraction(sum(values), len(values)), tuple(per_input))


# Task files ------------------------------------------------------------------


def _parse_foci(text: str, offset: int) -> Tuple[Focus, ...]:
    return tuple(parse_focus(word, offset) for word in text.split())


def _parse_bits(text: str, offset: int) -> Bits:
    text = text.replace(" ", "")
    if any(ch not in "01" for ch in text):
        raise ParseError(f"bit string expected, got {text!r}", offset)
    return tuple(int(ch) for ch in text)


def parse_task(text: str) -> TaskSpec:
    """
    inputs: in:1 in:2
    outputs: out0:1
    aux: aux0:1          (optional)
    00 -> 0              (missing rows make the task partial)
    """
    headers = {}
    table = {}
    offset = 0
    for line in strip_comments(text).splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            key, sep, value = stripped.partition(":")
            if "->" in stripped:
                left, _, right = stripped.partition("->")
                inputs = _parse_bits(left, offset)
                if inputs in table:
                    raise ParseError(f"duplicate table row {left.strip()}", offset)
                table[inputs] = _parse_bits(right, offset)
            elif sep and key.strip() in ("inputs", "outputs", "aux"):
                headers[key.strip()] = _parse_foci(value, offset)
            else:
                raise ParseError(f"unexpected task line {stripped!r}", offset)
        offset += len(line) + 1
    if "inputs" not in headers or "outputs" not in headers:
        raise ParseError("task needs inputs: and outputs: lines", 0)
    try:
        layout = RegisterLayout(headers["inputs"], headers["outputs"], headers.get("aux", ()))
        return TaskSpec(layout, table)
    except LayoutError as e:
        raise ParseError(str(e), 0) from None


def render_task(task: TaskSpec) -> str:
    return task.render()


# Standard layouts and tasks --------------------------------------------------


def foci(role: str, indices: Iterable[int], base: str = "", array: bool = False) -> Tuple[Focus, ...]:
    return tuple(Focus(role, i, base, array) for i in indices)


def task_from_function(layout: RegisterLayout, fn: Callable[[Bits], Sequence[int]], name: str = "") -> TaskSpec:
    table = {inputs: tuple(int(b) for b in fn(inputs)) for inputs in bit_vectors(layout.n_inputs)}
    return TaskSpec(layout, table, name)


def complement_task(layout: RegisterLayout) -> TaskSpec:
    """F(x) = 1 - x on a one bit layout"""
    return task_from_function(layout, lambda b: (1 - b[0],), "complement")


def constant_task(layout: RegisterLayout, value: Sequence[int]) -> TaskSpec:
    return task_from_function(layout, lambda b: tuple(value), "constant")


def parity_layout(n: int) -> RegisterLayout:
    return RegisterLayout(foci("in", range(1, n + 1)), foci("out0", [1]))


def parity_task(n: int) -> TaskSpec:
    return task_from_function(parity_layout(n), lambda b: (sum(b) % 2,), f"parity{n}")


def parity_interface(n: int, with_aux: bool = False) -> BasicActionInterface:
    """Sum of in:l.{i/i} plus out0:1.{1/1}; with_aux adds aux0:1.{i/c,i/i}"""
    entries = {f: {Method("i", "i")} for f in foci("in", range(1, n + 1))}
    entries[Focus("out0", 1)] = {Method("1", "1")}
    if with_aux:
        entries[Focus("aux0", 1)] = {Method("i", "c"), Method("i", "i")}
    return BasicActionInterface.of(entries)


def adder_layout(n: int, carry_register: bool = False) -> RegisterLayout:
    """in_a:k and in_b:k are bit k-1 of the summands; out0:(n+1) is the high bit"""
    aux = foci("aux0", [1]) if carry_register else ()
    return RegisterLayout(foci("in", range(1, n + 1), "_a") + foci("in", range(1, n + 1), "_b"),
                          foci("out0", range(1, n + 2)), aux)


def _from_bits(bits: Sequence[int]) -> int:
    return sum(b << k for k, b in enumerate(bits))


def _to_bits(value: int, width: int) -> Bits:
    return tuple((value >> k) & 1 for k in range(width))


def adder_task(n: int, carry_register: bool = False) -> TaskSpec:
    def add(bits):
        return _to_bits(_from_bits(bits[:n]) + _from_bits(bits[n:]), n + 1)
    return task_from_function(adder_layout(n, carry_register), add, f"add{n}")


def g_layout(k: int) -> RegisterLayout:
    return RegisterLayout(foci("in", [1]), foci("out0", range(1, 2 * k + 1)))


def g_task(k: int) -> TaskSpec:
    """Input 0 sets out0:1..k, input 1 sets out0:k+1..2k"""
    def select(bits):
        first = (1,) * k + (0,) * k
        return first if bits[0] == 0 else first[::-1]
    return task_from_function(g_layout(k), select, f"G{k}")


def e_layout(k: int) -> RegisterLayout:
    selectors = foci("inout", [1]) + foci("inout", range(1, k + 1), "_a") + foci("inout", range(1, k + 1), "_b")
    flags = foci("out0", range(1, k + 1), "_a") + foci("out0", range(1, k + 1), "_b")
    return RegisterLayout(selectors, selectors + flags)


def copy1d_layout() -> RegisterLayout:
    return RegisterLayout((Focus("in", 3, array=True),), (Focus("out0", 7, array=True),))


def copy1d_task() -> TaskSpec:
    return task_from_function(copy1d_layout(), lambda b: b, "copy1d")


def random_task(n: int, m: int, seed: int) -> TaskSpec:
    """Seeded random total function from in:1..n to out0:1..m"""
    rng = np.random.default_rng(seed)
    outputs = rng.integers(0, 2, size=(2 ** n, m), dtype=np.uint8)
    layout = RegisterLayout(foci("in", range(1, n + 1)), foci("out0", range(1, m + 1)))
    table = {inputs: tuple(int(b) for b in row) for inputs, row in zip(bit_vectors(n), outputs)}
    return TaskSpec(layout, table, f"random{n}x{m}@{seed}")


def all_total_tasks(n: int, m: int):
    """Every total function from in:1..n to out0:1..m"""
    layout = RegisterLayout(foci("in", range(1, n + 1)), foci("out0", range(1, m + 1)))
    inputs = bit_vectors(n)
    for outputs in itertools.product(bit_vectors(m), repeat=len(inputs)):
        yield TaskSpec(layout, dict(zip(inputs, outputs)))
