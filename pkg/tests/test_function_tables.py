from fractions import Fraction

import numpy as np
import pytest

from errors import InterfaceViolation, LayoutError, ParseError
from function_tables import (
    RegisterLayout, TaskSpec, Undefined, adder_task, bit_vectors, complement_task, computes,
    copy1d_layout, equivalent, extract_function, foci, initial_family, input_vectors, nos_profile,
    parity_task, parse_task, random_task, read_outputs, render_task,
)
from isa import parse
from isa.instructions import Focus
from services import parse_interface

IN_OUT = RegisterLayout(foci("in", [1]), foci("out", [1]))


def test_input_vectors_are_lexicographic():
    expected = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.uint8)
    assert np.array_equal(input_vectors(2), expected)
    assert bit_vectors(0) == [()]


def test_layout_rejects_duplicates():
    with pytest.raises(LayoutError):
        RegisterLayout(foci("in", [1, 1]), foci("out0", [1]))


def test_layout_rejects_wrong_roles():
    with pytest.raises(LayoutError):
        RegisterLayout(foci("out0", [1]), foci("out0", [2]))


def test_only_inout_foci_are_shared():
    shared = foci("inout", [1])
    assert RegisterLayout(shared, shared).n_outputs == 1


def test_arrays_carry_two_bits():
    assert copy1d_layout().n_inputs == 2
    assert copy1d_layout().n_outputs == 2


def test_initial_family_sets_inputs_and_fixed_outputs():
    layout = RegisterLayout(foci("in", [1, 2]), foci("out1", [1]), foci("aux0", [1]))
    family = initial_family(layout, (1, 0))
    assert family[Focus("in", 1)].content == 1
    assert family[Focus("out1", 1)].content == 1
    assert family[Focus("aux0", 1)].content == 0


def test_arbitrary_outputs_need_choices():
    with pytest.raises(LayoutError):
        initial_family(IN_OUT, (0,))
    assert initial_family(IN_OUT, (0,), (1,))[Focus("out", 1)].content == 1


def test_read_outputs_forgets_inputs():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    assert read_outputs(layout, initial_family(layout, (1,))) == (0,)


def test_x7_complements_for_every_initial_output():
    task = complement_task(IN_OUT)
    seq = parse("-out:1.i/c;out:1.i/c;-in:1.i/i;out:1.i/c;!")
    assert computes(seq, task, parse_interface("in:1.{i/i} + out:1.{i/c}"))


def test_depending_on_initial_output_is_inconsistent():
    table = extract_function(parse("!"), IN_OUT)
    assert table[(0,)] == Undefined("inconsistent")


def test_counterexample_reports_input():
    task = complement_task(RegisterLayout(foci("in", [1]), foci("out0", [1])))
    result = computes(parse("+in:1.i/i;out0:1.1/1;!"), task)
    assert not result
    assert result.counterexample.inputs == (0,)
    assert result.counterexample.expected == (1,)


def test_interface_violation_fails_the_check():
    task = complement_task(RegisterLayout(foci("in", [1]), foci("out0", [1])))
    result = computes(parse("-in:1.i/i;out0:1.1/1;!"), task, parse_interface("in:1.{i/i}"))
    assert not result
    assert "not within" in result.reason


def test_extract_function_raises_on_interface_violation():
    with pytest.raises(InterfaceViolation):
        extract_function(parse("in:2.i/i;!"), IN_OUT)


def test_divergence_leaves_entry_undefined():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    table = extract_function(parse("+in:1.i/i;#0;!"), layout)
    assert table[(1,)] == Undefined("diverged")
    assert table[(0,)] == (0,)


def test_partial_table_ignores_missing_inputs():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    task = TaskSpec(layout, {(1,): (0,)})
    assert not task.is_total
    assert computes(parse("+in:1.i/i;!;#0"), task)


def test_equivalence():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    assert equivalent(parse("-in:1.i/i;out0:1.1/1;!"), parse("+in:1.c/i;out0:1.1/1;!"), layout)
    assert not equivalent(parse("-in:1.i/i;out0:1.1/1;!"), parse("!"), layout)


def test_equivalence_with_a_focus_outside_the_layout():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    assert not equivalent(parse("in:2.i/i;!"), parse("!"), layout)
    # the foreign focus is never reached
    assert equivalent(parse("#2;in:2.i/i;!"), parse("!"), layout)


def test_nos_profile():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    profile = nos_profile(parse("-in:1.i/i;out0:1.1/1;!"), layout)
    assert profile.worst == 3
    assert profile.mean == Fraction(5, 2)


def test_adder_task_bits():
    task = adder_task(2)
    # a = 1 (in_a:1 set), b = 3: 4 = 100 read low bit first
    assert task.table[(1, 0, 1, 1)] == (0, 0, 1)


def test_parity_task():
    assert parity_task(3).table[(1, 1, 1)] == (1,)


def test_random_task_is_seeded():
    assert random_task(3, 3, 7).table == random_task(3, 3, 7).table


TASK_TEXT = """# two bit conjunction
inputs: in:1 in:2
outputs: out0:1
00 -> 0
01 -> 0
10 -> 0
11 -> 1
"""


def test_parse_task():
    task = parse_task(TASK_TEXT)
    assert task.layout.n_inputs == 2
    assert task.table[(1, 1)] == (1,)
    assert parse_task(render_task(task)).table == task.table


def test_parse_task_rejects_bad_rows():
    with pytest.raises(ParseError):
        parse_task("inputs: in:1\noutputs: out0:1\n0 -> 2\n")
    with pytest.raises(ParseError):
        parse_task("inputs: in:1\n0 -> 1\n")
