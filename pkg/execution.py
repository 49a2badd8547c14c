"""
Execution Engine - Deterministic runs of instruction sequences on service families
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import config
from errors import ServiceError
from isa.instructions import PGLB, Basic, BackwardJump, ForwardJump, Instruction, InstructionSequence, NEG, POS
from services.family import EMPTY_FAMILY, ServiceFamily

logger = logging.getLogger(__name__)

TERMINATED = "terminated"
DIVERGED = "diverged"
ERROR = "error"


@dataclass(frozen=True)
class TraceStep:
    position: int
    instruction: Instruction
    reply: Optional[int] = None

    def render(self) -> str:
        reply = "" if self.reply is None else str(self.reply)
        return f"{self.position}\t{self.instruction.render()}\t{reply}".rstrip("\t")


@dataclass(frozen=True)
class RunOutcome:
    status: str
    steps: int
    position: int
    family: Optional[ServiceFamily] = None   # final family, only when terminated
    cause: str = ""
    trace: Tuple[TraceStep, ...] = field(default=(), compare=False)

    @property
    def terminated(self) -> bool:
        return self.status == TERMINATED

    @property
    def nos(self) -> Union[int, float]:
        return self.steps if self.terminated else math.inf

    def render(self) -> str:
        if self.terminated:
            return f"terminated after {self.steps} steps"
        if self.status == ERROR:
            return f"error at position {self.position}: {self.cause}"
        return f"diverged at position {self.position}: {self.cause}"


def _step_target(instr: Instruction, pos: int, reply: Optional[int]) -> int:
    if isinstance(instr, ForwardJump):
        return pos + instr.counter
    if isinstance(instr, BackwardJump):
        return pos - instr.counter
    if instr.polarity == POS:
        return pos + 1 if reply == 1 else pos + 2
    if instr.polarity == NEG:
        return pos + 1 if reply == 0 else pos + 2
    return pos + 1


def _execute(seq: InstructionSequence, h: ServiceFamily, trace: bool,
             max_steps: Optional[int], detect_loops: bool) -> RunOutcome:
    kernels = h.as_dict()
    n = len(seq)
    pos, steps = 1, 0
    steps_log: List[TraceStep] = []

    # only foci the program can touch contribute to the loop detection key
    watched = sorted({u.focus for u in seq if isinstance(u, Basic) and u.focus in kernels})
    seen = set()
    check_loops = detect_loops and seq.dialect == PGLB

    def outcome(status, cause="", family=None):
        return RunOutcome(status, steps, pos, family, cause, tuple(steps_log))

    while True:
        if not 1 <= pos <= n:
            return outcome(DIVERGED, f"position {pos} outside 1..{n}")
        if max_steps is not None and steps >= max_steps:
            return outcome(DIVERGED, f"step bound {max_steps} reached")
        if check_loops:
            key = (pos, tuple(kernels[f] for f in watched))
            if key in seen:
                return outcome(DIVERGED, "configuration revisited")
            seen.add(key)

        instr = seq[pos - 1]
        steps += 1
        reply = None
        if isinstance(instr, Basic):
            kernel = kernels.get(instr.focus)
            if kernel is None:
                return outcome(ERROR, f"focus {instr.focus} is not bound")
            try:
                reply, kernels[instr.focus] = kernel.apply(instr.method)
            except ServiceError as e:
                return outcome(ERROR, str(e))
        if trace:
            steps_log.append(TraceStep(pos, instr, reply))
        if not isinstance(instr, (Basic, ForwardJump, BackwardJump)):
            return outcome(TERMINATED, family=ServiceFamily(kernels))
        if isinstance(instr, (ForwardJump, BackwardJump)) and instr.counter == 0:
            return outcome(DIVERGED, f"jump {instr.render()} with counter 0")
        pos = _step_target(instr, pos, reply)


def run(seq: InstructionSequence, h: ServiceFamily, trace: bool = False,
        max_steps: Optional[int] = None) -> RunOutcome:
    """
    Run from position 1; backward jump loops are caught by revisiting a
    (position, state of the touched kernels) pair
    """
    outcome = _execute(seq, h, trace, max_steps, detect_loops=True)
    if max_steps is None and outcome.steps > config.RUN_STEP_LIMIT:
        logger.warning(f"⚠️ run took {outcome.steps} steps, above RUN_STEP_LIMIT")
    logger.debug(f"🔁 {seq.render()} -> {outcome.render()}")
    return outcome


def run_bounded(seq: InstructionSequence, h: ServiceFamily, max_steps: int,
                trace: bool = False) -> RunOutcome:
    """Run with a step bound and no revisit detection; exceeding it is divergence"""
    return _execute(seq, h, trace, max_steps, detect_loops=False)


def state_space_bound(seq: InstructionSequence, h: ServiceFamily) -> int:
    """LLOC times the number of reachable kernel states, plus one"""
    states = 1
    for focus in {u.focus for u in seq if isinstance(u, Basic)}:
        kernel = h.get(focus)
        if kernel is not None and not kernel.is_inactive:
            states *= 8 if focus.array else 2
    return len(seq) * states + 1


def nos(seq: InstructionSequence, h: ServiceFamily) -> Union[int, float]:
    """Number of processed instructions; math.inf on divergence or error"""
    return run(seq, h).nos


def apply(seq: InstructionSequence, h: ServiceFamily) -> ServiceFamily:
    """seq • H; errors and divergence both yield the empty family"""
    outcome = run(seq, h)
    return outcome.family if outcome.terminated else EMPTY_FAMILY
