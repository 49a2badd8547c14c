"""
Metrics - LLOC, LLOC_gsc, syntactic classifiers and required interfaces
"""
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Tuple

from .instructions import Basic, BackwardJump, ForwardJump, InstructionSequence, Terminate
from .syntax import GscSequence, Plain

if TYPE_CHECKING:
    from services.interface import BasicActionInterface


def lloc(seq: InstructionSequence) -> int:
    """Number of instructions"""
    return len(seq.instrs)


def lloc_gsc(g: GscSequence) -> int:
    """LLOC without expanding repetitions; a repetition counts its body plus 2 + floor(log2 n)"""
    total = 0
    for segment in g.segments:
        if isinstance(segment, Plain):
            total += len(segment.instrs)
        else:
            total += len(segment.template) + 2 + segment.count.bit_length() - 1
    return total


@dataclass(frozen=True)
class ClassReport:
    is_single_pass: bool
    max_jump_size: int
    is_single_visit: bool
    only_final_termination: bool
    has_low_register_indices: bool

    def as_row(self) -> dict:
        return {
            "single_pass": self.is_single_pass,
            "max_jump": self.max_jump_size,
            "single_visit": self.is_single_visit,
            "only_final_term": self.only_final_termination,
            "low_indices": self.has_low_register_indices,
        }


def max_jump_size(seq: InstructionSequence) -> int:
    return max((u.counter for u in seq if isinstance(u, (ForwardJump, BackwardJump))), default=0)


def jump_report(seq: InstructionSequence) -> List[Tuple[int, str, int]]:
    """(position, rendered jump, size) for every jump instruction"""
    return [(pos, u.render(), u.counter)
            for pos, u in enumerate(seq, start=1)
            if isinstance(u, (ForwardJump, BackwardJump))]


def classify(seq: InstructionSequence) -> ClassReport:
    basics = [u for u in seq if isinstance(u, Basic)]
    visits = Counter(u.focus for u in basics)
    terms = [pos for pos, u in enumerate(seq, start=1) if isinstance(u, Terminate)]

    # "for each kind of register" the indices used form 1..max
    indices = defaultdict(set)
    for focus in visits:
        indices[focus.header].add(focus.index)
    low = all(used == set(range(1, max(used) + 1)) for used in indices.values())

    return ClassReport(
        is_single_pass=not any(isinstance(u, BackwardJump) for u in seq),
        max_jump_size=max_jump_size(seq),
        is_single_visit=all(count <= 1 for count in visits.values()),
        only_final_termination=terms == [len(seq)],
        has_low_register_indices=low,
    )


def required_interface(seq: InstructionSequence) -> "BasicActionInterface":
    """Focus/method pairs of all basic instructions, polarity ignored"""
    from services.interface import BasicActionInterface

    methods = defaultdict(set)
    for u in seq:
        if isinstance(u, Basic):
            methods[u.focus].add(u.method)
    return BasicActionInterface.of(methods)
