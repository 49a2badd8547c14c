"""
Instructions - Foci, methods and the instruction sequence value types
"""
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

from errors import IsaError

# Role words as written in focus headers
ROLE_WORDS = ("in", "inout", "out", "aux")
# Scalar roles; out0/out1/aux0/aux1 carry their initialisation digit
ROLES = ("in", "inout", "out", "out0", "out1", "aux0", "aux1")

CODES = "01ic"

PGA = "pga"        # single pass, no backward jumps
PGLB = "pglb"      # backward jumps allowed
DIALECTS = (PGA, PGLB)

PLAIN, POS, NEG = "", "+", "-"
POLARITIES = (PLAIN, POS, NEG)


@dataclass(frozen=True, order=True)
class Focus:
    """Name of a service: role header, optional role base, index"""
    role: str
    index: int
    base: str = ""
    array: bool = False

    def __post_init__(self):
        if self.role not in ROLES:
            raise IsaError(f"unknown role {self.role!r}")
        if self.index < 1:
            raise IsaError(f"focus index must be positive, got {self.index}")

    @property
    def word(self) -> str:
        return self.role.rstrip("01")

    @property
    def init_digit(self) -> str:
        return self.role[len(self.word):]

    @property
    def header(self) -> str:
        """Rendered role header, e.g. out0, out0_a, in1D, out1D0"""
        dim = "1D" if self.array else ""
        return f"{self.word}{dim}{self.init_digit}{self.base}"

    def render(self) -> str:
        return f"{self.header}:{self.index}"

    def sort_key(self) -> Tuple[str, int]:
        return (self.header, self.index)

    def __str__(self):
        return self.render()


DIRECT = "direct"
INDEX_BIT = "a1"


@dataclass(frozen=True)
class Method:
    """A y/e method; target a1 addresses the index bit of a 1D array"""
    yield_code: str
    effect_code: str
    target: str = DIRECT

    def __post_init__(self):
        if self.yield_code not in CODES or self.effect_code not in CODES:
            raise IsaError(f"bad method codes {self.yield_code}/{self.effect_code}")
        if self.target not in (DIRECT, INDEX_BIT):
            raise IsaError(f"bad method target {self.target!r}")

    def apply_bit(self, bit: int) -> Tuple[int, int]:
        """Reply and new content when applied to a bit"""
        return _code_value(self.yield_code, bit), _code_value(self.effect_code, bit)

    def render(self) -> str:
        prefix = "a1:" if self.target == INDEX_BIT else ""
        return f"{prefix}{self.yield_code}/{self.effect_code}"

    def sort_key(self) -> Tuple[int, int, int]:
        return (0 if self.target == DIRECT else 1,
                CODES.index(self.yield_code), CODES.index(self.effect_code))

    def __str__(self):
        return self.render()


def _code_value(code: str, bit: int) -> int:
    if code == "0":
        return 0
    if code == "1":
        return 1
    if code == "i":
        return bit
    return 1 - bit


# The 16 direct methods, ordered by yield then effect
M16 = tuple(Method(y, e) for y in CODES for e in CODES)
# Index-bit methods of a 1D array
A16 = tuple(Method(y, e, INDEX_BIT) for y in CODES for e in CODES)


@dataclass(frozen=True)
class Terminate:
    def render(self) -> str:
        return "!"


@dataclass(frozen=True)
class ForwardJump:
    counter: int

    def __post_init__(self):
        if self.counter < 0:
            raise IsaError(f"negative jump counter {self.counter}")

    def render(self) -> str:
        return f"#{self.counter}"


@dataclass(frozen=True)
class BackwardJump:
    counter: int

    def __post_init__(self):
        if self.counter < 0:
            raise IsaError(f"negative jump counter {self.counter}")

    def render(self) -> str:
        return f"\\#{self.counter}"


@dataclass(frozen=True)
class Basic:
    """Plain, positive test or negative test basic instruction f.m"""
    focus: Focus
    method: Method
    polarity: str = PLAIN

    def __post_init__(self):
        if self.polarity not in POLARITIES:
            raise IsaError(f"bad polarity {self.polarity!r}")
        if self.method.target == INDEX_BIT and not self.focus.array:
            raise IsaError(f"index bit method {self.method} on scalar focus {self.focus}")

    @property
    def is_test(self) -> bool:
        return self.polarity != PLAIN

    def render(self) -> str:
        return f"{self.polarity}{self.focus.render()}.{self.method.render()}"


Instruction = Union[Terminate, ForwardJump, BackwardJump, Basic]

TERMINATE = Terminate()


def instruction_key(instr: Instruction) -> tuple:
    """Total order: ! < #1 < #2 ... < \\#1 ... < basics by polarity, focus, method"""
    if isinstance(instr, Terminate):
        return (0,)
    if isinstance(instr, ForwardJump):
        return (1, instr.counter)
    if isinstance(instr, BackwardJump):
        return (2, instr.counter)
    return (3, POLARITIES.index(instr.polarity), instr.focus.sort_key(), instr.method.sort_key())


@dataclass(frozen=True)
class InstructionSequence:
    instrs: Tuple[Instruction, ...]
    dialect: str = PGA

    def __post_init__(self):
        if not self.instrs:
            raise IsaError("an instruction sequence has at least one instruction")
        if self.dialect not in DIALECTS:
            raise IsaError(f"unknown dialect {self.dialect!r}")
        if self.dialect == PGA and any(isinstance(u, BackwardJump) for u in self.instrs):
            raise IsaError("backward jump in a single pass sequence")

    @classmethod
    def of(cls, instrs: Iterable[Instruction], dialect: str = None) -> "InstructionSequence":
        """Build a sequence, choosing PGLB only when a backward jump is present"""
        instrs = tuple(instrs)
        if dialect is None:
            has_bwd = any(isinstance(u, BackwardJump) for u in instrs)
            dialect = PGLB if has_bwd else PGA
        return cls(instrs, dialect)

    def __len__(self):
        return len(self.instrs)

    def __iter__(self):
        return iter(self.instrs)

    def __getitem__(self, item):
        return self.instrs[item]

    def __add__(self, other: "InstructionSequence") -> "InstructionSequence":
        dialect = PGLB if PGLB in (self.dialect, other.dialect) else PGA
        return InstructionSequence(self.instrs + other.instrs, dialect)

    def render(self) -> str:
        return ";".join(u.render() for u in self.instrs)

    def __str__(self):
        return self.render()
