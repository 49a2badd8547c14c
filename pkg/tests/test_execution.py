import math

import pytest
from hypothesis import given

from execution import DIVERGED, ERROR, TERMINATED, apply, nos, run, run_bounded, state_space_bound
from function_tables import copy1d_layout, initial_family
from generators import gen_copy1d
from isa import parse
from services import EMPTY_FAMILY, br, parse_family
from tests.strategies import families, programs

OUT_ONE = parse_family("out0:1=br(1)")


@pytest.mark.parametrize("text, family, expected", [
    ("!", EMPTY_FAMILY, 1),
    ("#1;#1;!", EMPTY_FAMILY, 3),
    ("#1;#0;!;!", EMPTY_FAMILY, math.inf),
    ("+out0:1.1/1;!", OUT_ONE, 2),
    ("#2;!", EMPTY_FAMILY, math.inf),
    ("+in:3.i/i;!", parse_family("out0:1=br(0)"), math.inf),
])
def test_nos_examples(text, family, expected):
    assert nos(parse(text), family) == expected


def test_backward_jump_before_the_start_diverges():
    # published as 2; the backward jump from position 2 lands on position 0
    outcome = run(parse("+out0:1.1/1;\\#2;!"), OUT_ONE)
    assert outcome.status == DIVERGED
    assert outcome.nos == math.inf


def test_unbound_focus_is_an_error():
    outcome = run(parse("+in:3.i/i;!"), parse_family("out0:1=br(0)"))
    assert outcome.status == ERROR
    assert outcome.position == 1


def test_method_outside_interface_is_an_error():
    outcome = run(parse("out0:1.1/1;!"), parse_family("out0:1=br(0) [i/i]"))
    assert outcome.status == ERROR


def test_falling_off_the_end_diverges():
    assert run(parse("out0:1.1/1"), parse_family("out0:1=br(0)")).status == DIVERGED


def test_test_polarities():
    family = parse_family("in:1=br(0); out0:1=br(0)")
    # positive test on reply 0 skips the next instruction
    assert apply(parse("+in:1.i/i;out0:1.1/1;!"), family) == family
    # negative test on reply 0 runs it
    written = apply(parse("-in:1.i/i;out0:1.1/1;!"), family)
    assert written == parse_family("in:1=br(0); out0:1=br(1)")


def test_apply_preserves_state_on_termination():
    family = parse_family("out0:1=br(1)")
    assert apply(parse("!"), family) == family


def test_apply_error_gives_empty_family():
    assert apply(parse("+in:3.i/i;!"), parse_family("out0:1=br(0)")) == EMPTY_FAMILY


def test_backward_jump_loop_is_detected():
    outcome = run(parse("out0:1.i/c;\\#1"), parse_family("out0:1=br(0)"))
    assert outcome.status == DIVERGED
    assert "revisited" in outcome.cause


def test_trace_has_one_step_per_instruction():
    outcome = run(parse("+in:1.i/i;#2;out0:1.1/1;!"), parse_family("in:1=br(1); out0:1=br(0)"), trace=True)
    assert outcome.status == TERMINATED
    assert [step.position for step in outcome.trace] == [1, 2, 4]
    assert outcome.trace[0].reply == 1
    assert outcome.trace[0].render() == "1\t+in:1.i/i\t1"


def test_run_bounded_copy1d_agrees_with_run():
    seq = gen_copy1d()
    family = initial_family(copy1d_layout(), (1, 0))
    bounded = run_bounded(seq, family, 10 * 8 ** 2 * 2)
    assert bounded == run(seq, family)


def test_run_bounded_stops_at_the_bound():
    outcome = run_bounded(parse("out0:1.i/c;\\#1"), parse_family("out0:1=br(0)"), 50)
    assert outcome.status == DIVERGED
    assert outcome.steps == 50


def test_state_space_bound():
    seq = gen_copy1d()
    assert state_space_bound(seq, initial_family(copy1d_layout(), (0, 0))) == 6 * 64 + 1


@given(programs(), families())
def test_bounded_run_with_state_space_bound_matches_run(seq, family):
    unbounded = run(seq, family)
    bounded = run_bounded(seq, family, state_space_bound(seq, family))
    assert bounded.status == unbounded.status
    if unbounded.status == TERMINATED:
        assert bounded.family == unbounded.family
        assert bounded.steps == unbounded.steps


@given(programs(backward=False), families())
def test_terminated_runs_count_at_least_one_step(seq, family):
    outcome = run(seq, family)
    assert outcome.status != TERMINATED or outcome.steps >= 1
