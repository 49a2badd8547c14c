import pytest

from errors import IsaError
from function_tables import (
    RegisterLayout, complement_task, computes, constant_task, copy1d_task, extract_function, foci, g_task,
    parity_interface, parity_task, task_from_function,
)
from generators import alternative_initialisation, complementation_suite, e_task, example_g_interface, gen_example_e
from isa import PGA, PGLB, lloc, parse, required_interface
from records import pack
from services import parse_interface
from shortest_search import (
    FOUND, NONE_UP_TO_BOUND, SearchConstraints, enumerate_candidates, min_lloc, search_document,
    search_report, verify_lower_bound,
)

CASES = {case.name: case for case in complementation_suite()}


@pytest.mark.parametrize("name", ["X_1", "X_2", "X_3", "X_4", "X_5", "X_6"])
def test_complement_minimum(name):
    case = CASES[name]
    result = min_lloc(case.task, SearchConstraints(case.interface, max_lloc=case.min_lloc))
    assert result.status == FOUND
    assert result.min_lloc == case.min_lloc
    assert computes(result.witnesses[0], case.task, case.interface)


def test_complement_minimum_over_i7():
    case = CASES["X_7"]
    constraints = SearchConstraints(case.interface, max_lloc=5)
    assert verify_lower_bound(case.task, constraints, 4)
    assert min_lloc(case.task, constraints).min_lloc == 5


def test_smallest_inout_witness():
    case = CASES["X_1"]
    result = min_lloc(case.task, SearchConstraints(case.interface, max_lloc=2), max_witnesses=None)
    rendered = {w.render() for w in result.witnesses}
    assert "inout:1.1/c;!" in rendered
    assert "inout:1.i/c;!" in rendered


def test_alternative_initialisation():
    for interface, layout, expected in alternative_initialisation().values():
        result = min_lloc(constant_task(layout, (0,)), SearchConstraints(interface, max_lloc=3))
        assert result.min_lloc == expected


def test_nothing_found_reports_the_bound():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    result = min_lloc(complement_task(layout), SearchConstraints(parse_interface("in:1.{i/i}"), max_lloc=3))
    assert result.status == NONE_UP_TO_BOUND
    assert "no sequence with LLOC <= 3" in search_report(result)


def _naive_minimum(task, constraints):
    for length in range(1, constraints.max_lloc + 1):
        for seq in enumerate_candidates(constraints, length, prune=False):
            if computes(seq, task, constraints.interface):
                return length
    return None


@pytest.mark.parametrize("name", ["X_1", "X_2", "X_5"])
def test_pruned_search_agrees_with_naive_enumeration(name):
    case = CASES[name]
    constraints = SearchConstraints(case.interface, max_lloc=case.min_lloc)
    assert min_lloc(case.task, constraints).min_lloc == _naive_minimum(case.task, constraints)


ONE_BIT = RegisterLayout(foci("in", [1]), foci("out0", [1]))
ONE_BIT_FUNCTIONS = {
    "zero": lambda b: (0,),
    "one": lambda b: (1,),
    "copy": lambda b: (b[0],),
    "flip": lambda b: (1 - b[0],),
}
SMALL_INTERFACES = (
    "in:1.{i/i} + out0:1.{1/1, 0/0}",
    "in:1.{i/i, i/c} + out0:1.{1/1}",
    "in:1.{1/1} + out0:1.{i/c, 1/1}",
)


@pytest.mark.parametrize("dialect", [PGA, PGLB])
@pytest.mark.parametrize("interface", SMALL_INTERFACES)
@pytest.mark.parametrize("fn", sorted(ONE_BIT_FUNCTIONS))
def test_bounded_completeness(dialect, interface, fn):
    task = task_from_function(ONE_BIT, ONE_BIT_FUNCTIONS[fn])
    constraints = SearchConstraints(parse_interface(interface), dialect=dialect, max_lloc=3)
    assert min_lloc(task, constraints, jobs=1).min_lloc == _naive_minimum(task, constraints)


@pytest.mark.slow
@pytest.mark.parametrize("interface", SMALL_INTERFACES)
@pytest.mark.parametrize("fn", sorted(ONE_BIT_FUNCTIONS))
def test_bounded_completeness_at_four(interface, fn):
    task = task_from_function(ONE_BIT, ONE_BIT_FUNCTIONS[fn])
    constraints = SearchConstraints(parse_interface(interface), max_lloc=4)
    assert min_lloc(task, constraints, jobs=1).min_lloc == _naive_minimum(task, constraints)


def _total_tables(constraints, layout, prune):
    tables = set()
    for length in range(1, constraints.max_lloc + 1):
        for seq in enumerate_candidates(constraints, length, prune=prune):
            table = extract_function(seq, layout)
            if len(table.defined()) == len(table.rows):
                tables.add(table)
    return tables


@pytest.mark.parametrize("dialect", [PGA, PGLB])
@pytest.mark.parametrize("interface", ["inout:1.{i/c, 1/1}", "inout:1.{i/i, 0/c}"])
def test_pruning_keeps_every_computable_table(dialect, interface):
    layout = CASES["X_4"].layout
    constraints = SearchConstraints(parse_interface(interface), dialect=dialect, max_lloc=3)
    pruned = _total_tables(constraints, layout, prune=True)
    assert pruned
    assert pruned == _total_tables(constraints, layout, prune=False)


def _rendered(constraints, length, prune):
    return {seq.render() for seq in enumerate_candidates(constraints, length, prune=prune)}


def test_single_instruction_alphabet():
    constraints = SearchConstraints(parse_interface("in:1.{i/i}"), max_lloc=1)
    assert _rendered(constraints, 1, prune=False) == {"!", "#1", "in:1.i/i", "+in:1.i/i", "-in:1.i/i"}
    assert _rendered(constraints, 1, prune=True) == {"!"}


@pytest.mark.parametrize("dialect, dropped, kept", [
    # unreachable positions hold the filler
    (PGA, "!;in:1.i/i;!", "!;!;!"),
    # the last instruction lets a run terminate or loop
    (PGA, "in:1.i/i;in:1.i/i", "in:1.i/i;!"),
    # jump targets stay inside the sequence
    (PGA, "#3;!;!", "#2;!;!"),
    (PGLB, "\\#1;!", "in:1.i/i;\\#1"),
    # a test whose branches meet again is the plain basic
    (PGA, "+in:1.i/i;#1;!", "in:1.i/i;#1;!"),
    (PGLB, "-in:1.i/i;#1;\\#2", "in:1.i/i;#1;\\#2"),
])
def test_each_canonical_form_cut(dialect, dropped, kept):
    constraints = SearchConstraints(parse_interface("in:1.{i/i}"), dialect=dialect, max_lloc=3)
    length = dropped.count(";") + 1
    assert dropped in _rendered(constraints, length, prune=False)
    assert dropped not in _rendered(constraints, length, prune=True)
    assert kept in _rendered(constraints, length, prune=True)


def test_canonical_candidates_end_in_termination_or_backward_jump():
    constraints = SearchConstraints(parse_interface("in:1.{i/i}"), dialect=PGLB, max_lloc=3)
    for seq in enumerate_candidates(constraints, 3):
        assert seq[-1].render() == "!" or seq[-1].render().startswith("\\#")


def test_single_visit_candidates():
    constraints = SearchConstraints(parse_interface("in:1.{i/i} + out0:1.{1/1}"), max_lloc=3, single_visit=True)
    for seq in enumerate_candidates(constraints, 3):
        assert constraints.admits(seq)


def test_max_jump_bounds_candidates():
    constraints = SearchConstraints(parse_interface("in:1.{i/i}"), max_lloc=4, max_jump=1)
    assert all(constraints.admits(seq) for seq in enumerate_candidates(constraints, 4))


def test_only_final_termination():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    task = complement_task(layout)
    constraints = SearchConstraints(parse_interface("in:1.{i/i} + out0:1.{1/1}"), max_lloc=4,
                                    only_final_termination=True)
    result = min_lloc(task, constraints)
    assert result.min_lloc == 3
    assert all(w.render().count("!") == 1 for w in result.witnesses)


def test_backward_jumps_search():
    layout = RegisterLayout(foci("in", [1]), foci("out0", [1]))
    constraints = SearchConstraints(parse_interface("in:1.{i/i} + out0:1.{1/1}"), dialect=PGLB, max_lloc=3)
    result = min_lloc(complement_task(layout), constraints)
    assert result.min_lloc == 3


def test_constraints_are_validated():
    with pytest.raises(IsaError):
        SearchConstraints(parse_interface("in:1.{i/i}"), max_lloc=0)
    with pytest.raises(IsaError):
        SearchConstraints(parse_interface("in:1.{i/i}"), max_lloc=3, max_jump=5)


def test_example_g_minimum_k1():
    result = min_lloc(g_task(1), SearchConstraints(example_g_interface(1), max_lloc=4))
    assert result.min_lloc == 4


@pytest.mark.slow
def test_example_g_minimum_k2():
    result = min_lloc(g_task(2), SearchConstraints(example_g_interface(2), max_lloc=6))
    assert result.min_lloc == 6


def test_jobs_do_not_change_machine_output():
    case = CASES["X_6"]
    constraints = SearchConstraints(case.interface, max_lloc=4)
    serial = min_lloc(case.task, constraints, jobs=1, max_witnesses=None)
    parallel = min_lloc(case.task, constraints, jobs=4, max_witnesses=None)
    assert pack(search_document(serial)) == pack(search_document(parallel))
    assert search_report(serial, "msgpack") == search_report(parallel, "msgpack")


@pytest.mark.slow
def test_single_visit_impossibility_up_to_eight():
    layout = RegisterLayout(foci("in", [1, 2]), foci("out0", [1]))
    task = task_from_function(layout, lambda b: (b[1] if b[0] else 1 - b[1],))
    interface = parse_interface("in:1.M16 + in:2.M16 + out0:1.M16")
    assert verify_lower_bound(task, SearchConstraints(interface, max_lloc=8, single_visit=True), 8)


@pytest.mark.slow
def test_copy1d_needs_more_than_six_without_backward_jumps():
    methods = "{i/i, 1/1, 1/c, a1:i/c, a1:i/i}"
    interface = parse_interface(f"in1D:3.{methods} + out1D0:7.{methods}")
    assert verify_lower_bound(copy1d_task(), SearchConstraints(interface, max_lloc=6), 6)


@pytest.mark.slow
def test_parity_desk_minimum_is_at_most_paris0():
    result = min_lloc(parity_task(2), SearchConstraints(parity_interface(2), max_lloc=8))
    assert result.found
    assert result.min_lloc <= lloc(parse("+in:1.i/i;#4;+in:2.i/i;#3;#3;-in:2.i/i;out0:1.1/1;!"))


@pytest.mark.slow
def test_example_e_with_short_jumps_needs_nine_at_k1():
    y = gen_example_e(1, "Y")
    constraints = SearchConstraints(required_interface(y), max_lloc=9, max_jump=3)
    assert verify_lower_bound(e_task(1), constraints, 8)
    result = min_lloc(e_task(1), constraints, max_witnesses=1)
    assert result.min_lloc == lloc(y) == 9
