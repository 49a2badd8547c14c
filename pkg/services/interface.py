"""
Basic Action Interface - Finite maps from foci to method sets
"""
import re
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Tuple

from errors import ParseError
from isa.instructions import A16, M16, Focus, Method
from isa.syntax import parse_focus, parse_method, strip_comments


class BasicActionInterface:
    """
    A finite collection f.V of foci with method interfaces; + is pointwise union
    """

    def __init__(self, entries: Mapping[Focus, FrozenSet[Method]] = None):
        self._entries: Dict[Focus, FrozenSet[Method]] = {
            f: frozenset(v) for f, v in (entries or {}).items()
        }

    @classmethod
    def of(cls, entries: Mapping[Focus, Iterable[Method]]) -> "BasicActionInterface":
        return cls({f: frozenset(v) for f, v in entries.items()})

    @classmethod
    def single(cls, focus: Focus, methods: Iterable[Method]) -> "BasicActionInterface":
        return cls({focus: frozenset(methods)})

    def __add__(self, other: "BasicActionInterface") -> "BasicActionInterface":
        merged = dict(self._entries)
        for focus, methods in other._entries.items():
            merged[focus] = merged.get(focus, frozenset()) | methods
        return BasicActionInterface(merged)

    def methods(self, focus: Focus) -> FrozenSet[Method]:
        return self._entries.get(focus, frozenset())

    def foci(self) -> Tuple[Focus, ...]:
        return tuple(sorted(self._entries, key=Focus.sort_key))

    def items(self) -> Iterator[Tuple[Focus, FrozenSet[Method]]]:
        for focus in self.foci():
            yield focus, self._entries[focus]

    def actions(self) -> Tuple[Tuple[Focus, Method], ...]:
        """All focus/method pairs in focus then method order"""
        return tuple((f, m) for f, ms in self.items() for m in sorted(ms, key=Method.sort_key))

    def is_subinterface(self, other: "BasicActionInterface") -> bool:
        return all(methods <= other.methods(focus) for focus, methods in self._entries.items())

    __le__ = is_subinterface

    def __eq__(self, other):
        if not isinstance(other, BasicActionInterface):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __len__(self):
        return len(self._entries)

    def __bool__(self):
        return bool(self._entries)

    def render(self) -> str:
        if not self._entries:
            return "∅"
        parts = []
        for focus, methods in self.items():
            names = ",".join(m.render() for m in sorted(methods, key=Method.sort_key))
            parts.append(f"{focus.render()}.{{{names}}}")
        return " + ".join(parts)

    def __repr__(self):
        return f"BasicActionInterface({self.render()})"


def subinterface(inner: BasicActionInterface, outer: BasicActionInterface) -> bool:
    return inner.is_subinterface(outer)


EMPTY_INTERFACE = BasicActionInterface()

_ENTRY_RE = re.compile(r"^(?P<focus>[^.{]+?)\s*\.\s*(?:\{(?P<set>[^}]*)\}|(?P<kw>M16|A16|M32))$")


def parse_method_set(text: str, offset: int):
    methods = set()
    for name in re.split(r"[\s,]+", text.strip()):
        if not name:
            continue
        if name == "M16":
            methods.update(M16)
        elif name == "A16":
            methods.update(A16)
        elif name == "M32":
            methods.update(M16 + A16)
        else:
            methods.add(parse_method(name, offset))
    return methods


def parse_interface(text: str) -> BasicActionInterface:
    """
    Parse either one `focus: m1 m2 ...` line per focus or the inline
    form `in:1.{i/i} + out:1.M16`; M16 (direct), A16 (index bit) and M32 are keywords
    """
    text = strip_comments(text).strip()
    result = EMPTY_INTERFACE
    if not text or text == "∅":
        return result
    if "." in text and "\n" not in text:
        offset = 0
        for part in text.split("+"):
            match = _ENTRY_RE.match(part.strip())
            if not match:
                raise ParseError(f"malformed interface entry {part.strip()!r}", offset)
            focus = parse_focus(match.group("focus"), offset)
            methods = parse_method_set(match.group("set") or match.group("kw"), offset)
            result = result + BasicActionInterface.single(focus, methods)
            offset += len(part) + 1
        return result
    offset = 0
    for line in text.splitlines():
        if line.strip():
            focus_text, sep, names = line.rpartition(": ")
            if not sep:
                focus_text, sep, names = line.partition(" ")
            focus = parse_focus(focus_text.strip().rstrip(":"), offset)
            result = result + BasicActionInterface.single(focus, parse_method_set(names, offset))
        offset += len(line) + 1
    return result
