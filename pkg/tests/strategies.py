"""
Hypothesis strategies for foci, kernels, families, interfaces and programs
"""
from hypothesis import strategies as st

from isa.instructions import (
    A16, CODES, INDEX_BIT, M16, NEG, PLAIN, POS, ROLES, TERMINATE,
    Basic, BackwardJump, Focus, ForwardJump, InstructionSequence, Method,
)
from services.family import ServiceFamily
from services.interface import BasicActionInterface
from services.kernels import Array1DKernel, RegisterKernel

SCALAR_FOCI = (Focus("in", 1), Focus("in", 2), Focus("out0", 1), Focus("out", 1), Focus("aux0", 1))
ARRAY_FOCI = (Focus("in", 3, array=True), Focus("out0", 7, array=True))

# every role, base and dimension the grammar allows
any_focus = st.builds(Focus, st.sampled_from(ROLES), st.integers(1, 12), st.sampled_from(("", "_a", "_b")),
                      st.booleans())

bits = st.integers(min_value=0, max_value=1)
direct_methods = st.sampled_from(M16)
method_sets = st.frozensets(direct_methods)


@st.composite
def registers(draw, allow_inactive=True):
    if allow_inactive and draw(st.integers(0, 9)) == 0:
        return RegisterKernel(None, frozenset())
    return RegisterKernel(draw(bits), draw(method_sets.filter(bool)))


@st.composite
def arrays(draw):
    return Array1DKernel(draw(bits), draw(bits), draw(bits), frozenset(M16 + A16))


def kernel_for(focus: Focus):
    return arrays() if focus.array else registers()


@st.composite
def families(draw, foci=SCALAR_FOCI + ARRAY_FOCI):
    chosen = draw(st.lists(st.sampled_from(foci), unique=True, max_size=len(foci)))
    return ServiceFamily({f: draw(kernel_for(f)) for f in chosen})


focus_sets = st.frozensets(st.sampled_from(SCALAR_FOCI + ARRAY_FOCI))


@st.composite
def interfaces(draw):
    chosen = draw(st.lists(st.sampled_from(SCALAR_FOCI), unique=True, max_size=3))
    return BasicActionInterface.of({f: draw(method_sets) for f in chosen})


@st.composite
def basics(draw, foci=SCALAR_FOCI):
    focus = draw(foci if isinstance(foci, st.SearchStrategy) else st.sampled_from(foci))
    method = Method(draw(st.sampled_from(CODES)), draw(st.sampled_from(CODES)))
    if focus.array and draw(st.booleans()):
        method = Method(method.yield_code, method.effect_code, INDEX_BIT)
    return Basic(focus, method, draw(st.sampled_from((PLAIN, POS, NEG))))


def instructions(max_jump: int = 4, backward: bool = True, foci=SCALAR_FOCI):
    options = [st.just(TERMINATE), st.builds(ForwardJump, st.integers(0, max_jump)), basics(foci)]
    if backward:
        options.append(st.builds(BackwardJump, st.integers(0, max_jump)))
    return st.one_of(options)


@st.composite
def programs(draw, max_size=6, backward=True, foci=SCALAR_FOCI):
    instrs = draw(st.lists(instructions(backward=backward, foci=foci), min_size=1, max_size=max_size))
    return InstructionSequence.of(instrs)
