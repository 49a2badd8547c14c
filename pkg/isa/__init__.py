"""
Instruction sequence layer: syntax, parsing and syntactic metrics
"""
from .instructions import (
    A16, M16, PGA, PGLB, TERMINATE,
    Basic, BackwardJump, Focus, ForwardJump, InstructionSequence, Method, Terminate,
    instruction_key,
)
from .syntax import GscSequence, expand_gsc, parse, parse_focus, parse_gsc, parse_method, program, render
from .metrics import ClassReport, classify, jump_report, lloc, lloc_gsc, max_jump_size, required_interface

__all__ = [
    'A16', 'M16', 'PGA', 'PGLB', 'TERMINATE',
    'Basic', 'BackwardJump', 'Focus', 'ForwardJump', 'InstructionSequence', 'Method', 'Terminate',
    'instruction_key',
    'GscSequence', 'expand_gsc', 'parse', 'parse_focus', 'parse_gsc', 'parse_method', 'program', 'render',
    'ClassReport', 'classify', 'jump_report', 'lloc', 'lloc_gsc', 'max_jump_size', 'required_interface',
]
