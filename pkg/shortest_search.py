"""
Shortest Search - Iterative deepening search for minimal LLOC programs over an interface
"""
import asyncio
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Tuple

import config
from errors import IsaError
from execution import run_bounded
from function_tables import TaskSpec, bit_vectors, computes, initial_family, read_outputs
from isa.instructions import (
    INDEX_BIT, NEG, PGA, PGLB, PLAIN, POS, TERMINATE,
    Basic, BackwardJump, Focus, ForwardJump, Instruction, InstructionSequence,
)
from isa.metrics import classify, required_interface
from records import Output, emit
from services.interface import BasicActionInterface

logger = logging.getLogger(__name__)

FOUND = "found"
NONE_UP_TO_BOUND = "none"


@dataclass(frozen=True)
class SearchConstraints:
    interface: BasicActionInterface
    dialect: str = PGA
    max_lloc: int = config.SEARCH_MAX_LLOC
    max_jump: Optional[int] = None
    single_visit: bool = False
    only_final_termination: bool = False

    def __post_init__(self):
        if self.max_lloc < 1:
            raise IsaError("max LLOC must be at least 1")
        if self.dialect not in (PGA, PGLB):
            raise IsaError(f"unknown dialect {self.dialect!r}")
        if self.max_jump is not None and not 0 <= self.max_jump <= self.max_lloc:
            raise IsaError("max jump must lie within 0..max LLOC")

    def admits(self, seq: InstructionSequence) -> bool:
        """Syntactic membership of the constrained class"""
        report = classify(seq)
        return (required_interface(seq).is_subinterface(self.interface)
                and (self.dialect == PGLB or report.is_single_pass)
                and (self.max_jump is None or report.max_jump_size <= self.max_jump)
                and (not self.single_visit or report.is_single_visit)
                and (not self.only_final_termination or report.only_final_termination))

    def echo(self) -> Dict[str, object]:
        return {
            "interface": self.interface.render(),
            "dialect": self.dialect,
            "max_lloc": self.max_lloc,
            "max_jump": -1 if self.max_jump is None else self.max_jump,
            "single_visit": self.single_visit,
            "only_final_termination": self.only_final_termination,
        }


@dataclass
class SearchStats:
    candidates: int = 0   # instruction choices tried, or whole candidates for backward jump search
    pruned: int = 0
    runs: int = 0         # instructions executed across all runs
    memo_hits: int = 0

    def __add__(self, other: "SearchStats") -> "SearchStats":
        return SearchStats(self.candidates + other.candidates, self.pruned + other.pruned,
                           self.runs + other.runs, self.memo_hits + other.memo_hits)


@dataclass(frozen=True)
class SearchResult:
    status: str
    bound: int
    constraints: SearchConstraints
    min_lloc: Optional[int] = None
    witnesses: Tuple[InstructionSequence, ...] = ()
    stats: SearchStats = field(default_factory=SearchStats, compare=False)

    @property
    def found(self) -> bool:
        return self.status == FOUND


# Alphabet --------------------------------------------------------------------


def _basics(constraints: SearchConstraints, foci_available=None) -> List[Basic]:
    actions = [(f, m) for f, m in constraints.interface.actions()
               if foci_available is None or f in foci_available]
    return [Basic(f, m, pol) for pol in (PLAIN, POS, NEG) for f, m in actions
            if m.target != INDEX_BIT or f.array]


def _filler(constraints: SearchConstraints, i: int, length: int) -> Instruction:
    """Canonical instruction for a position no run can reach"""
    if constraints.only_final_termination and i != length:
        return ForwardJump(1)
    return TERMINATE


def _jump_limit(constraints: SearchConstraints, length: int) -> int:
    return length if constraints.max_jump is None else min(length, constraints.max_jump)


def _alphabet(constraints: SearchConstraints, i: int, length: int, basics: List[Basic],
              prune: bool) -> List[Instruction]:
    """Instructions allowed at position i, in the canonical order"""
    limit = _jump_limit(constraints, length)
    letters: List[Instruction] = []
    if not constraints.only_final_termination or i == length:
        letters.append(TERMINATE)
    letters.extend(ForwardJump(k) for k in range(1, limit + 1) if not prune or i + k <= length)
    if constraints.dialect == PGLB:
        letters.extend(BackwardJump(k) for k in range(1, limit + 1) if not prune or k < i)
    letters.extend(basics)
    return letters


def _successors(u: Instruction, i: int) -> Tuple[int, ...]:
    if u == TERMINATE:
        return ()
    if isinstance(u, ForwardJump):
        return (i + u.counter,) if u.counter else ()
    if isinstance(u, BackwardJump):
        return (i - u.counter,) if u.counter else ()
    return (i + 1, i + 2) if u.is_test else (i + 1,)


def _reachable(instrs: Tuple[Instruction, ...]) -> set:
    n = len(instrs)
    seen, todo = set(), [1]
    while todo:
        i = todo.pop()
        if i in seen or not 1 <= i <= n:
            continue
        seen.add(i)
        todo.extend(_successors(instrs[i - 1], i))
    return seen


def _canonical(instrs: Tuple[Instruction, ...], constraints: SearchConstraints) -> bool:
    n = len(instrs)
    last = instrs[-1]
    if last != TERMINATE and not isinstance(last, BackwardJump):
        return False
    for i in range(1, n):
        if isinstance(instrs[i - 1], Basic) and instrs[i - 1].is_test and instrs[i] == ForwardJump(1):
            return False
    reachable = _reachable(instrs)
    return all(i in reachable or instrs[i - 1] == _filler(constraints, i, n) for i in range(1, n + 1))


def enumerate_candidates(constraints: SearchConstraints, length: int, prune: bool = True,
                         first: Optional[Instruction] = None) -> Iterator[InstructionSequence]:
    """
    Every sequence of exactly `length` instructions in the constrained
    class, in lexicographic instruction order. Pruning drops jumps
    leaving the sequence, tests followed by #1, non-final last
    instructions and unreachable positions not holding the filler
    """
    basics = _basics(constraints)
    alphabets = [_alphabet(constraints, i, length, basics, prune) for i in range(1, length + 1)]
    if first is not None:
        alphabets[0] = [u for u in alphabets[0] if u == first]

    def extend(prefix: List[Instruction], used: frozenset):
        i = len(prefix) + 1
        if i > length:
            instrs = tuple(prefix)
            if not prune or _canonical(instrs, constraints):
                yield InstructionSequence.of(instrs, constraints.dialect)
            return
        for u in alphabets[i - 1]:
            if isinstance(u, Basic) and constraints.single_visit:
                if u.focus in used:
                    continue
                yield from extend(prefix + [u], used | {u.focus})
            else:
                yield from extend(prefix + [u], used)

    yield from extend([], frozenset())


# Online evaluation of single pass candidates ---------------------------------


def _encode(kernel) -> int:
    if hasattr(kernel, "cells"):
        return kernel.index_bit | kernel.cell0 << 1 | kernel.cell1 << 2
    return kernel.content


class _Machine:
    """Integer state tables for the task's foci"""

    def __init__(self, task: TaskSpec, basics: List[Basic]):
        layout = task.layout
        self.foci: Tuple[Focus, ...] = layout.foci()
        self.slot = {f: j for j, f in enumerate(self.foci)}
        self.transitions: Dict[Tuple[Focus, object], Dict[int, Tuple[int, int]]] = {}
        for u in basics:
            self.transitions.setdefault((u.focus, u.method), self._table(u.focus, u.method))
        self.outputs = [(self.slot[f], f.array, cell) for f in layout.outputs
                        for cell in ((0, 1) if f.array else (0,))]
        self.runs = []
        for inputs, expected in sorted(task.table.items()):
            for choice in bit_vectors(layout.n_arbitrary):
                family = initial_family(layout, inputs, choice)
                state = tuple(_encode(family[f]) for f in self.foci)
                self.runs.append((1, state, expected))

    @staticmethod
    def _table(focus: Focus, method) -> Dict[int, Tuple[int, int]]:
        table = {}
        if not focus.array:
            for s in (0, 1):
                table[s] = method.apply_bit(s)
            return table
        for s in range(8):
            idx = s & 1
            if method.target == INDEX_BIT:
                reply, new = method.apply_bit(idx)
                table[s] = (reply, (s & ~1) | new)
            else:
                shift = 1 + idx
                reply, new = method.apply_bit((s >> shift) & 1)
                table[s] = (reply, (s & ~(1 << shift)) | (new << shift))
        return table

    def read(self, state: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple((state[j] >> (1 + cell)) & 1 if array else state[j]
                     for j, array, cell in self.outputs)


class _SinglePassSearch:
    """
    Depth first over positions 1..L while every task run executes the
    prefix; a choice is cut as soon as some run terminates wrongly or
    leaves the sequence
    """

    def __init__(self, task: TaskSpec, constraints: SearchConstraints, length: int,
                 max_witnesses: Optional[int]):
        self.constraints = constraints
        self.length = length
        self.max_witnesses = max_witnesses
        self.basics = _basics(constraints, set(task.layout.foci()))
        self.machine = _Machine(task, self.basics)
        self.stats = SearchStats()
        self.dead = set()
        self.witnesses: List[InstructionSequence] = []

    def _letters(self, i: int) -> List[Instruction]:
        if i == self.length:
            return [TERMINATE]
        return _alphabet(self.constraints, i, self.length, self.basics, prune=True)

    def _execute(self, u: Instruction, i: int, runs: List[tuple]) -> Optional[List[tuple]]:
        """Advance the runs sitting at i; None when one of them fails"""
        moved = []
        machine = self.machine
        for pos, state, expected in runs:
            self.stats.runs += 1
            if u == TERMINATE:
                if machine.read(state) != expected:
                    return None
                continue
            if isinstance(u, ForwardJump):
                target = i + u.counter
            else:
                j = machine.slot[u.focus]
                reply, new = machine.transitions[(u.focus, u.method)][state[j]]
                state = state[:j] + (new,) + state[j + 1:]
                if u.polarity == POS:
                    target = i + 1 if reply == 1 else i + 2
                elif u.polarity == NEG:
                    target = i + 1 if reply == 0 else i + 2
                else:
                    target = i + 1
            if target > self.length:
                return None
            moved.append((target, state, expected))
        return moved

    def search(self, first: Optional[Instruction] = None):
        self._visit(1, self.machine.runs, [], frozenset(), first)
        return self.witnesses

    def _full(self) -> bool:
        return self.max_witnesses is not None and len(self.witnesses) >= self.max_witnesses

    def _visit(self, i: int, pending: List[tuple], prefix: List[Instruction],
               used: frozenset, first: Optional[Instruction] = None) -> bool:
        """True when some completion of the prefix is a witness"""
        if i > self.length:
            self.witnesses.append(InstructionSequence(tuple(prefix), PGA))
            return True
        after_test = bool(prefix) and isinstance(prefix[-1], Basic) and prefix[-1].is_test
        key = (i, frozenset(pending), used, after_test)
        if key in self.dead:
            self.stats.memo_hits += 1
            return False

        here = [r for r in pending if r[0] == i]
        rest = [r for r in pending if r[0] != i]
        found = False
        if not here:
            u = _filler(self.constraints, i, self.length)
            if first is None or u == first:
                found = self._visit(i + 1, rest, prefix + [u], used)
        else:
            for u in self._letters(i):
                if first is not None and u != first:
                    continue
                if self._full():
                    break
                self.stats.candidates += 1
                if isinstance(u, Basic):
                    if self.constraints.single_visit and u.focus in used:
                        continue
                    next_used = used | {u.focus} if self.constraints.single_visit else used
                else:
                    next_used = used
                if u == ForwardJump(1) and after_test:
                    continue
                moved = self._execute(u, i, here)
                if moved is None:
                    self.stats.pruned += 1
                    continue
                if self._visit(i + 1, rest + moved, prefix + [u], next_used):
                    found = True
        if not found:
            self.dead.add(key)
        return found


# Shards ----------------------------------------------------------------------


def _first_letters(task: TaskSpec, constraints: SearchConstraints, length: int) -> List[Instruction]:
    if constraints.dialect == PGA:
        if length == 1:
            return [TERMINATE]
        return _alphabet(constraints, 1, length, _basics(constraints, set(task.layout.foci())), prune=True)
    return _alphabet(constraints, 1, length, _basics(constraints), prune=True)


def _bounded_computes(seq: InstructionSequence, task: TaskSpec, stats: SearchStats) -> bool:
    """Run every defined entry under the state space step bound"""
    layout = task.layout
    states = 1
    for focus in layout.foci():
        states *= 8 if focus.array else 2
    bound = len(seq) * states + 1
    for inputs, expected in sorted(task.table.items()):
        for choice in bit_vectors(layout.n_arbitrary):
            outcome = run_bounded(seq, initial_family(layout, inputs, choice), bound)
            stats.runs += outcome.steps
            if not outcome.terminated or read_outputs(layout, outcome.family) != expected:
                return False
    return True


def search_shard(task: TaskSpec, constraints: SearchConstraints, length: int,
                 first: Instruction, max_witnesses: Optional[int]):
    """Witnesses of exactly `length` instructions starting with `first`"""
    if constraints.dialect == PGA:
        searcher = _SinglePassSearch(task, constraints, length, max_witnesses)
        witnesses = searcher.search(first)
        return witnesses, searcher.stats
    stats = SearchStats()
    witnesses = []
    foci_available = set(task.layout.foci())
    for seq in enumerate_candidates(constraints, length, first=first):
        stats.candidates += 1
        if any(isinstance(u, Basic) and u.focus not in foci_available for u in seq):
            stats.pruned += 1
            continue
        if _bounded_computes(seq, task, stats):
            witnesses.append(seq)
            if max_witnesses is not None and len(witnesses) >= max_witnesses:
                break
        else:
            stats.pruned += 1
    return witnesses, stats


def _search_shard_args(args):
    return search_shard(*args)


async def _run_shards(jobs: List[tuple], workers: int):
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [loop.run_in_executor(pool, _search_shard_args, job) for job in jobs]
        return await asyncio.gather(*futures)


def _search_length(task: TaskSpec, constraints: SearchConstraints, length: int,
                   jobs: int, max_witnesses: Optional[int]):
    shards = [(task, constraints, length, first, max_witnesses)
              for first in _first_letters(task, constraints, length)]
    if jobs > 1 and len(shards) > 1:
        results = asyncio.run(_run_shards(shards, jobs))
    else:
        results = [search_shard(*shard) for shard in shards]
    witnesses: List[InstructionSequence] = []
    stats = SearchStats()
    for shard_witnesses, shard_stats in results:
        witnesses.extend(shard_witnesses)
        stats = stats + shard_stats
    if max_witnesses is not None:
        witnesses = witnesses[:max_witnesses]
    return witnesses, stats


def _certify(witnesses, task: TaskSpec, constraints: SearchConstraints, length: int):
    for seq in witnesses:
        if len(seq) != length or not constraints.admits(seq) or not computes(seq, task, constraints.interface):
            raise IsaError(f"search produced an unsound witness {seq.render()}")


def min_lloc(task: TaskSpec, constraints: SearchConstraints, jobs: int = config.SEARCH_JOBS,
             max_witnesses: Optional[int] = config.SEARCH_MAX_WITNESSES,
             min_length: int = 1) -> SearchResult:
    """
    Iterative deepening on LLOC up to constraints.max_lloc; the first
    length with a witness is minimal within the class
    """
    stats = SearchStats()
    started = time.perf_counter()
    for length in range(min_length, constraints.max_lloc + 1):
        depth_started = time.perf_counter()
        witnesses, depth_stats = _search_length(task, constraints, length, jobs, max_witnesses)
        stats = stats + depth_stats
        logger.info(f"🔎 LLOC {length}: {depth_stats.candidates} candidates, "
                    f"{len(witnesses)} witnesses ({time.perf_counter() - depth_started:.2f}s)")
        if witnesses:
            _certify(witnesses, task, constraints, length)
            logger.info(f"🔎 min LLOC {length} found in {time.perf_counter() - started:.2f}s")
            return SearchResult(FOUND, constraints.max_lloc, constraints, length, tuple(witnesses), stats)
    return SearchResult(NONE_UP_TO_BOUND, constraints.max_lloc, constraints, stats=stats)


def verify_lower_bound(task: TaskSpec, constraints: SearchConstraints, bound: int,
                       jobs: int = config.SEARCH_JOBS) -> bool:
    """True iff nothing in the class with LLOC <= bound computes the task"""
    max_jump = None if constraints.max_jump is None else min(constraints.max_jump, bound)
    result = min_lloc(task, replace(constraints, max_lloc=bound, max_jump=max_jump), jobs=jobs, max_witnesses=1)
    return not result.found


def search_document(result: SearchResult) -> Dict[str, object]:
    document: Dict[str, object] = {"status": result.status, "bound": result.bound}
    document.update(result.constraints.echo())
    document["min_lloc"] = result.min_lloc if result.found else -1
    document["witnesses"] = [w.render() for w in result.witnesses]
    document["candidates"] = result.stats.candidates
    document["pruned"] = result.stats.pruned
    document["runs"] = result.stats.runs
    return document


def search_report(result: SearchResult, fmt: str = config.DEFAULT_FORMAT) -> Output:
    c = result.constraints
    lines = [f"interface: {c.interface.render()}",
             f"class: {c.dialect}" + (f", max jump {c.max_jump}" if c.max_jump is not None else "")
             + (", single visit" if c.single_visit else "")
             + (", final termination only" if c.only_final_termination else "")]
    if result.found:
        shown = len(result.witnesses)
        lines.append(f"min LLOC = {result.min_lloc}, {shown} witness{'es' if shown != 1 else ''} shown")
        lines.extend(f"  {w.render()}" for w in result.witnesses)
    else:
        lines.append(f"no sequence with LLOC <= {result.bound} computes the task "
                     f"({result.stats.candidates} candidates)")
    lines.append(f"candidates {result.stats.candidates}, pruned {result.stats.pruned}, "
                 f"runs {result.stats.runs} (deterministic for any number of jobs)")
    return emit(search_document(result), fmt, "\n".join(lines))
