"""
Syntax - Parsing and printing of instruction sequences and generalised semicolons
"""
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from errors import GscExpansionError, IsaError, ParseError
from .instructions import (
    DIRECT, INDEX_BIT, PGA, PGLB, PLAIN, TERMINATE,
    Basic, BackwardJump, Focus, ForwardJump, Instruction, InstructionSequence, Method,
)

_FOCUS_RE = re.compile(r"^(inout|in|out|aux)(1D)?([01])?(_[A-Za-z]+)?:(.+)$")
_METHOD_RE = re.compile(r"^(a1:)?([01ic])/([01ic])$")
_AFFINE_RE = re.compile(r"^(?:(\d*)\*?k)?([+-]?\d+)?$")
_REP_RE = re.compile(r"^rep\s*k\s*=\s*1\s*\.\.\s*(\d+)\s*\{(.*)\}$", re.S)


def strip_comments(text: str) -> str:
    """Drop // comments up to the end of each line"""
    return "\n".join(line.split("//", 1)[0] for line in text.splitlines())


def _squeeze(text: str) -> str:
    return re.sub(r"\s+", "", text)


def _split(text: str, sep: str = ";") -> List[Tuple[str, int]]:
    """Split at top-level separators, keeping offsets; braces nest"""
    parts, depth, start = [], 0, 0
    for pos, ch in enumerate(text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced '}'", pos)
        elif ch == sep and depth == 0:
            parts.append((text[start:pos], start))
            start = pos + 1
    if depth:
        raise ParseError("unbalanced '{'", len(text))
    parts.append((text[start:], start))
    return parts


def _role(word: str, digit: Optional[str], offset: int) -> str:
    if word in ("in", "inout"):
        if digit:
            raise ParseError(f"role {word} takes no initialisation digit", offset)
        return word
    if word == "aux" and not digit:
        raise ParseError("role aux needs an initialisation digit", offset)
    return word + (digit or "")


def _parse_header(text: str, offset: int):
    match = _FOCUS_RE.match(text)
    if not match:
        raise ParseError(f"malformed focus {text!r}", offset)
    word, dim, digit, base, index = match.groups()
    return _role(word, digit, offset), base or "", dim is not None, index


def parse_focus(text: str, offset: int = 0) -> Focus:
    role, base, array, index = _parse_header(_squeeze(text), offset)
    if not (index.isascii() and index.isdigit()):
        raise ParseError(f"focus index must be a numeral, got {index!r}", offset)
    try:
        return Focus(role, int(index), base, array)
    except IsaError as e:
        raise ParseError(str(e), offset) from None


def parse_method(text: str, offset: int = 0) -> Method:
    match = _METHOD_RE.match(_squeeze(text))
    if not match:
        raise ParseError(f"malformed method {text!r}", offset)
    a1, y, e = match.groups()
    return Method(y, e, INDEX_BIT if a1 else DIRECT)


def _split_basic(body: str, offset: int) -> Tuple[str, str]:
    # the focus ends at the first '.' after its ':'
    colon = body.find(":")
    dot = body.find(".", colon + 1) if colon >= 0 else -1
    if dot < 0:
        raise ParseError(f"malformed instruction {body!r}", offset)
    return body[:dot], body[dot + 1:]


def parse_instruction(text: str, offset: int = 0) -> Instruction:
    body = _squeeze(text)
    if not body:
        raise ParseError("empty instruction", offset)
    if body == "!":
        return TERMINATE
    if body.startswith("\\#"):
        return BackwardJump(_numeral(body[2:], offset))
    if body.startswith("#"):
        return ForwardJump(_numeral(body[1:], offset))
    polarity = PLAIN
    if body[0] in "+-":
        polarity, body = body[0], body[1:]
    focus_text, method_text = _split_basic(body, offset)
    focus = parse_focus(focus_text, offset)
    method = parse_method(method_text, offset)
    try:
        return Basic(focus, method, polarity)
    except IsaError as e:
        raise ParseError(str(e), offset) from None


def _numeral(text: str, offset: int) -> int:
    if not (text.isascii() and text.isdigit()):
        raise ParseError(f"jump counter must be a numeral, got {text!r}", offset)
    return int(text)


def parse(text: str, dialect: Optional[str] = None) -> InstructionSequence:
    """
    Parse program text; dialect None picks PGLB only when a backward jump occurs
    """
    text = strip_comments(text)
    if not text.strip():
        raise ParseError("empty program text", 0)
    instrs = [parse_instruction(chunk, offset) for chunk, offset in _split(text)]
    if dialect == PGA:
        for (chunk, offset), instr in zip(_split(text), instrs):
            if isinstance(instr, BackwardJump):
                raise ParseError("backward jump in a single pass program", offset)
    return InstructionSequence.of(instrs, dialect)


def render(seq: InstructionSequence) -> str:
    return seq.render()


# Generalised semicolon ------------------------------------------------------


@dataclass(frozen=True)
class Affine:
    """a*k + b in the loop variable k"""
    a: int
    b: int

    def at(self, k: int) -> int:
        return self.a * k + self.b

    def render(self) -> str:
        if self.a == 0:
            return str(self.b)
        head = "k" if self.a == 1 else f"{self.a}k"
        if self.b == 0:
            return head
        return f"{head}{self.b:+d}"


def parse_affine(text: str, offset: int = 0) -> Affine:
    text = _squeeze(text).strip("()")
    match = _AFFINE_RE.match(text)
    if not text or not match:
        raise ParseError(f"malformed index expression {text!r}", offset)
    coeff, const = match.groups()
    if "k" not in text:
        return Affine(0, int(const))
    return Affine(int(coeff) if coeff else 1, int(const) if const else 0)


@dataclass(frozen=True)
class TemplateInstruction:
    """An instruction whose focus index or jump counter depends on k"""
    kind: str                      # "!", "#", "\\#" or "basic"
    counter: Affine = Affine(0, 0)
    polarity: str = PLAIN
    focus: Optional[Focus] = None  # prototype; its index is replaced
    index: Affine = Affine(0, 1)
    method: Optional[Method] = None

    def instantiate(self, k: int) -> Instruction:
        if self.kind == "!":
            return TERMINATE
        if self.kind in ("#", "\\#"):
            value = self.counter.at(k)
            if value < 0:
                raise GscExpansionError(f"jump counter {self.counter.render()} is {value} at k={k}")
            return ForwardJump(value) if self.kind == "#" else BackwardJump(value)
        index = self.index.at(k)
        if index < 1:
            raise GscExpansionError(f"focus index {self.index.render()} is {index} at k={k}")
        focus = Focus(self.focus.role, index, self.focus.base, self.focus.array)
        return Basic(focus, self.method, self.polarity)

    def render(self) -> str:
        if self.kind == "!":
            return "!"
        if self.kind in ("#", "\\#"):
            return f"{self.kind}{self.counter.render()}"
        return f"{self.polarity}{self.focus.header}:{self.index.render()}.{self.method.render()}"


def template_of(instr: Instruction) -> TemplateInstruction:
    """Constant template for a concrete instruction"""
    if isinstance(instr, Basic):
        return TemplateInstruction("basic", polarity=instr.polarity, focus=instr.focus,
                                   index=Affine(0, instr.focus.index), method=instr.method)
    if isinstance(instr, ForwardJump):
        return TemplateInstruction("#", counter=Affine(0, instr.counter))
    if isinstance(instr, BackwardJump):
        return TemplateInstruction("\\#", counter=Affine(0, instr.counter))
    return TemplateInstruction("!")


def parse_template(text: str, offset: int = 0) -> TemplateInstruction:
    body = _squeeze(text)
    if not body:
        raise ParseError("empty instruction", offset)
    if body == "!":
        return TemplateInstruction("!")
    if body.startswith("\\#"):
        return TemplateInstruction("\\#", counter=parse_affine(body[2:], offset))
    if body.startswith("#"):
        return TemplateInstruction("#", counter=parse_affine(body[1:], offset))
    polarity = PLAIN
    if body[0] in "+-":
        polarity, body = body[0], body[1:]
    focus_text, method_text = _split_basic(body, offset)
    role, base, array, index_text = _parse_header(focus_text, offset)
    method = parse_method(method_text, offset)
    if method.target == INDEX_BIT and not array:
        raise ParseError("index bit method on a scalar focus", offset)
    return TemplateInstruction("basic", polarity=polarity, focus=Focus(role, 1, base, array),
                               index=parse_affine(index_text, offset), method=method)


@dataclass(frozen=True)
class Plain:
    instrs: Tuple[Instruction, ...]


@dataclass(frozen=True)
class Repeat:
    count: int
    template: Tuple[TemplateInstruction, ...]

    def __post_init__(self):
        if self.count < 1:
            raise IsaError("repeat count must be positive")
        if not self.template:
            raise IsaError("repeat body is empty")


Segment = Union[Plain, Repeat]


@dataclass(frozen=True)
class GscSequence:
    segments: Tuple[Segment, ...]

    def render(self) -> str:
        parts = []
        for segment in self.segments:
            if isinstance(segment, Plain):
                parts.extend(u.render() for u in segment.instrs)
            else:
                body = ";".join(t.render() for t in segment.template)
                parts.append(f"rep k=1..{segment.count} {{ {body} }}")
        return ";".join(parts)


def parse_gsc(text: str) -> GscSequence:
    """Parse text with `rep k=1..N { ... }` segments between plain instructions"""
    text = strip_comments(text)
    segments: List[Segment] = []
    plain: List[Instruction] = []
    for chunk, offset in _split(text):
        stripped = chunk.strip()
        if stripped.startswith("rep"):
            match = _REP_RE.match(stripped)
            if not match:
                raise ParseError("malformed rep segment", offset)
            if plain:
                segments.append(Plain(tuple(plain)))
                plain = []
            count, body = match.groups()
            template = tuple(parse_template(part, offset + off) for part, off in _split(body))
            try:
                segments.append(Repeat(int(count), template))
            except IsaError as e:
                raise ParseError(str(e), offset) from None
        else:
            plain.append(parse_instruction(chunk, offset))
    if plain:
        segments.append(Plain(tuple(plain)))
    return GscSequence(tuple(segments))


def expand_gsc(g: GscSequence, dialect: Optional[str] = None) -> InstructionSequence:
    instrs: List[Instruction] = []
    for segment in g.segments:
        if isinstance(segment, Plain):
            instrs.extend(segment.instrs)
        else:
            for k in range(1, segment.count + 1):
                instrs.extend(t.instantiate(k) for t in segment.template)
    return InstructionSequence.of(instrs, dialect)


def program(*parts: Union[str, InstructionSequence]) -> InstructionSequence:
    """Concatenate program fragments given as text or sequences"""
    seqs = [parse(p) if isinstance(p, str) else p for p in parts]
    result = seqs[0]
    for seq in seqs[1:]:
        result = result + seq
    return result


__all__ = [
    "Affine", "GscSequence", "Plain", "Repeat", "TemplateInstruction",
    "expand_gsc", "parse", "parse_focus", "parse_gsc", "parse_instruction", "parse_method",
    "program", "render", "strip_comments", "template_of", "PGA", "PGLB",
]
