"""
Family Literals - Text form of service families used by fixtures and the CLI

    in:1=br(0)
    out1D0:1=arr(i=0,c0=1,c1=0)
    out0:1=br(1) [i/i 1/1]

Bindings are separated by newlines or ';'.
"""
import re

from errors import ParseError
from isa.syntax import parse_focus, strip_comments
from .family import EMPTY_FAMILY, ServiceFamily, compose
from .interface import parse_method_set
from .kernels import INACTIVE_ARRAY, Array1DKernel, br

_BR_RE = re.compile(r"^br\((?P<content>[01*])\)$")
_ARR_RE = re.compile(r"^arr\((?:\*|i=(?P<i>[01]),c0=(?P<c0>[01]),c1=(?P<c1>[01]))\)$")
_BINDING_RE = re.compile(r"^(?P<focus>[^=]+)=(?P<kernel>[^\[]+?)(?:\[(?P<methods>[^\]]*)\])?$")


def _kernel(text: str, methods_text, focus, offset: int):
    text = re.sub(r"\s+", "", text)
    match = _BR_RE.match(text)
    if match:
        if focus.array:
            raise ParseError(f"array focus {focus} bound to a register", offset)
        content = match.group("content")
        if content == "*":
            return br(None)
        kernel = br(int(content))
    else:
        match = _ARR_RE.match(text)
        if not match:
            raise ParseError(f"malformed kernel {text!r}", offset)
        if not focus.array:
            raise ParseError(f"scalar focus {focus} bound to an array", offset)
        if match.group("i") is None:
            return INACTIVE_ARRAY
        kernel = Array1DKernel(int(match.group("i")), int(match.group("c0")), int(match.group("c1")))
    if methods_text is not None:
        kernel = kernel.with_methods(parse_method_set(methods_text, offset))
    return kernel


def parse_family(text: str) -> ServiceFamily:
    """A focus bound twice composes to the inactive kernel, as ⊕ does"""
    text = strip_comments(text)
    family = EMPTY_FAMILY
    offset = 0
    for chunk in re.split(r"[;\n]", text):
        stripped = chunk.strip()
        if stripped and stripped != "∅":
            match = _BINDING_RE.match(stripped)
            if not match:
                raise ParseError(f"malformed binding {stripped!r}", offset)
            focus = parse_focus(match.group("focus"), offset)
            kernel = _kernel(match.group("kernel"), match.group("methods"), focus, offset)
            family = compose(family, ServiceFamily({focus: kernel}))
        offset += len(chunk) + 1
    return family


def render_family(family: ServiceFamily) -> str:
    """Inverse of parse_family, one binding per line"""
    return "\n".join(f"{focus.render()}={kernel.render()}" for focus, kernel in family.items())
