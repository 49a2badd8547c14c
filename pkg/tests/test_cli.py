import pytest

import cli
from records import unpack

COMPLEMENT_TASK = """inputs: in:1
outputs: out0:1
0 -> 1
1 -> 0
"""

X_7 = "-out:1.i/c;out:1.i/c;-in:1.i/i;out:1.i/c;!"


@pytest.fixture
def complement_file(tmp_path):
    path = tmp_path / "complement.task"
    path.write_text(COMPLEMENT_TASK)
    return str(path)


def test_lloc(capsys):
    assert cli.main(["lloc", "out1:1.0/0;!"]) == cli.OK
    assert capsys.readouterr().out == "2\n"


def test_lloc_gsc_counts_the_folded_form(capsys):
    assert cli.main(["lloc", "--gsc", "rep k=1..3 { +in:k.i/i;aux0:1.i/c };!"]) == cli.OK
    assert capsys.readouterr().out == "6\n"


def test_nos(capsys):
    assert cli.main(["nos", "--seq", "#1;#1;!"]) == cli.OK
    assert capsys.readouterr().out == "3\n"


def test_nos_of_diverging_run(capsys):
    assert cli.main(["nos", "--seq", "#2;!"]) == cli.OK
    assert capsys.readouterr().out == "inf\n"


def test_run_with_trace(capsys):
    code = cli.main(["run", "+in:1.i/i;#2;out0:1.1/1;!", "--family", "in:1=br(1); out0:1=br(0)", "--trace"])
    assert code == cli.OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "1\t+in:1.i/i\t1"
    assert "NOS 3" in out


def test_apply_error_prints_the_empty_family(capsys):
    assert cli.main(["apply", "+in:3.i/i;!", "--family", "out0:1=br(0)"]) == cli.OK
    assert capsys.readouterr().out == "∅\n"


def test_check_passes_and_fails(complement_file, capsys):
    assert cli.main(["check", "-in:1.i/i;out0:1.1/1;!", "--task", complement_file]) == cli.OK
    assert capsys.readouterr().out == "ok\n"
    assert cli.main(["check", "+in:1.i/i;out0:1.1/1;!", "--task", complement_file]) == cli.NEGATIVE
    assert capsys.readouterr().out.startswith("fails")


def test_equiv_reads_sequences_from_files(tmp_path, complement_file, capsys):
    seq = tmp_path / "x.isa"
    seq.write_text("-in:1.i/i;out0:1.1/1;! // complement\n")
    assert cli.main(["equiv", str(seq), str(seq), "--layout", complement_file]) == cli.OK
    assert cli.main(["equiv", str(seq), "!", "--layout", complement_file]) == cli.NEGATIVE
    assert capsys.readouterr().out == "equivalent\nnot equivalent\n"


def test_unknown_flag_is_a_usage_error(capsys):
    assert cli.main(["lloc", "!", "--bogus"]) == cli.USAGE


def test_parse_error_is_a_usage_error(capsys):
    assert cli.main(["lloc", "in:1.x/y;!"]) == cli.USAGE
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_repro_id(capsys):
    assert cli.main(["repro", "nope"]) == cli.USAGE
    assert "unknown repro id" in capsys.readouterr().err


def test_msgpack_output(capsysbinary):
    assert cli.main(["lloc", "#1;!", "--format", "msgpack"]) == cli.OK
    assert unpack(capsysbinary.readouterr().out) == {"lloc": 2}


def test_msgpack_inf(capsysbinary):
    assert cli.main(["--format", "msgpack", "nos", "--seq", "#0;!"]) == cli.OK
    assert unpack(capsysbinary.readouterr().out) == {"nos": "inf"}


def test_gen_paris0(capsys):
    assert cli.main(["gen", "paris0", "--n", "4", "--format", "tsv"]) == cli.OK
    lines = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    assert lines["lloc"] == "18"


def test_gen_adder_variant_lloc(capsysbinary):
    assert cli.main(["gen", "add", "--n", "3", "--variant", "A2", "--format", "msgpack"]) == cli.OK
    assert unpack(capsysbinary.readouterr().out)["lloc"] == 14 * 3 - 5


def test_gen_e_defaults_to_x(capsys):
    assert cli.main(["gen", "e", "--k", "2"]) == cli.OK
    seq = capsys.readouterr().out.strip()
    assert seq.count(";") + 1 == 4 * 2 + 4


def test_gen_universal_needs_a_task(capsys):
    assert cli.main(["gen", "universal"]) == cli.USAGE


def test_gen_universal_from_task(complement_file, capsysbinary):
    assert cli.main(["gen", "universal", "--task", complement_file, "--format", "msgpack"]) == cli.OK
    assert unpack(capsysbinary.readouterr().out)["lloc"] == 2 ** 1 * (1 + 3) - 2


def test_search_tsv(complement_file, capsys):
    code = cli.main(["search", "--task", complement_file, "--interface", "in:1.{i/i} + out0:1.{1/1}",
                     "--max-lloc", "3", "--format", "tsv"])
    assert code == cli.OK
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    assert ["min_lloc", "3"] in rows
    assert ["witnesses", "-in:1.i/i;out0:1.1/1;!"] in rows


def test_search_nothing_found(complement_file, capsys):
    code = cli.main(["search", "--task", complement_file, "--interface", "in:1.{i/i}", "--max-lloc", "2"])
    assert code == cli.NEGATIVE
    assert "no sequence with LLOC <= 2" in capsys.readouterr().out


def test_unfold_with_explicit_power(capsys):
    assert cli.main(["unfold", "--in", "#1;!;\\#2", "--power", "1"]) == cli.OK
    assert capsys.readouterr().out == "#1;!;#1\n"


def test_unfold_auto_needs_a_layout(capsys):
    assert cli.main(["unfold", "--in", "#1;!;\\#2"]) == cli.USAGE


def test_repro_nos_table(capsys):
    assert cli.main(["repro", "nos-table"]) == cli.OK
    out = capsys.readouterr().out
    assert "DISCREPANCY" in out
    assert out.rstrip().endswith("nos-table: 7/7 PASS (1 discrepancy with the published value)")


def test_programs_starting_with_a_negative_test(capsys):
    assert cli.main(["lloc", X_7]) == cli.OK
    assert cli.main(["nos", "--seq", "-in:1.i/i;!", "--family", "in:1=br(0)"]) == cli.OK
    assert cli.main(["--format", "tsv", "classify", X_7]) == cli.OK
    out = capsys.readouterr().out.splitlines()
    assert out[:2] == ["5", "2"]
    assert "lloc\t5" in out


def test_negative_test_programs_in_every_position(complement_file, capsys):
    x = "-in:1.i/i;out0:1.1/1;!"
    assert cli.main(["equiv", x, "-in:1.i/i;out0:1.1/1;!;!", "--layout", complement_file]) == cli.OK
    assert cli.main(["check", "--task", complement_file, x]) == cli.OK
    assert cli.main(["run", x, "--family", "in:1=br(0); out0:1=br(0)"]) == cli.OK


def test_options_are_not_mistaken_for_programs():
    assert cli.shield_programs(["-v", "--format", "tsv", "-in:1.i/i;!"]) == ["-v", "--format", "tsv", " -in:1.i/i;!"]


def test_repro_numbered_id(capsys):
    assert cli.main(["repro", "prop13"]) == cli.OK
    assert capsys.readouterr().out.rstrip().endswith("complement-min: 2/2 PASS")


def test_equiv_with_a_foreign_focus_is_a_negative_answer(complement_file, capsys):
    assert cli.main(["equiv", "in:2.i/i;!", "!", "--layout", complement_file]) == cli.NEGATIVE
    assert capsys.readouterr().out == "not equivalent\n"
