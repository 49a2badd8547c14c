import os

import pytest

import config
from errors import IsaError
from records import read_golden, unpack
from repro import ALIASES, BUNDLES, BundleReport, repro_report, run_bundle


@pytest.mark.parametrize("bundle", [
    "nos-table", "closed-form", "copy1d", "bounded-jump", "interface-algebra", "alt-init", "unfold",
    "example-e", "complement", "parity",
])
def test_quick_bundles_pass(bundle):
    report = run_bundle(bundle)
    assert report.claims
    assert report.ok, report.render()


@pytest.mark.slow
@pytest.mark.parametrize("bundle", [
    "universal", "add-lloc", "complement-min", "example-g", "single-visit",
])
def test_slow_bundles_pass(bundle):
    report = run_bundle(bundle, jobs=2)
    assert report.ok, report.render()


def test_nos_table_notes_one_discrepancy():
    report = run_bundle("nos-table")
    noted = [c for c in report.claims if c.discrepancy]
    assert len(noted) == 1
    assert "\\#2" in noted[0].name
    assert report.summary() == "nos-table: 7/7 PASS (1 discrepancy with the published value)"


def test_unknown_bundle():
    with pytest.raises(IsaError):
        run_bundle("nope")


def test_every_bundle_is_described():
    assert all(text for text, _ in BUNDLES.values())


def test_numbered_ids_resolve_to_bundles():
    assert set(ALIASES.values()) <= set(BUNDLES)
    report = run_bundle("prop13")
    assert report.bundle == "complement-min"
    assert report.ok, report.render()


def test_paris1_is_checked_with_its_accumulator():
    report = run_bundle("parity")
    paris1 = [c for c in report.claims if c.name.startswith("PARIS1")]
    assert len(paris1) == 8
    assert all(c.ok for c in paris1), report.render()


def test_report_formats():
    report = BundleReport("demo")
    report.add("first", True, "1/1")
    report.add("second", False, discrepancy="published 2")
    assert not report.ok
    assert repro_report(report).splitlines() == [
        "PASS\tfirst\t1/1",
        "FAIL\tsecond\tDISCREPANCY: published 2",
        "demo: 1/2 PASS (1 discrepancy with the published value)",
    ]
    document = unpack(repro_report(report, "msgpack"))
    assert document["passed"] == 1
    assert document["discrepancies"] == ["second: published 2"]
    assert "claims\tFAIL second\n" in repro_report(report, "tsv")


def test_parity_desk_value_is_pinned_in_the_repository():
    assert os.path.isabs(config.GOLDEN_DIR)
    pinned = read_golden(os.path.join(config.GOLDEN_DIR, "parity2.msgpack"))
    assert pinned == {"task": "parity2", "interface": "in:1.{i/i} + in:2.{i/i} + out0:1.{1/1}", "min_lloc": 8}


@pytest.mark.slow
def test_parity_desk_matches_the_pinned_value():
    report = run_bundle("parity-desk")
    assert report.ok, report.render()
    assert "matches pinned value" in report.claims[0].name


@pytest.mark.slow
def test_parity_desk_pins_then_compares(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "GOLDEN_DIR", str(tmp_path))
    first = run_bundle("parity-desk")
    assert first.ok
    pinned = read_golden(str(tmp_path / "parity2.msgpack"))
    assert pinned["task"] == "parity2"
    second = run_bundle("parity-desk")
    assert second.ok
    assert "matches pinned value" in second.claims[0].name
