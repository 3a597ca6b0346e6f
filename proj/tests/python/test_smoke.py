import json
from pathlib import Path

import pytest

cmcheck = pytest.importorskip("cmcheck")

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def read(name):
    return (FIXTURES / name).read_text()


def test_catalog_lists_the_builtins():
    names = cmcheck.models()
    assert "Linearizability" in names and "MonotonicReads" in names
    assert "lastwrite" in cmcheck.model_formula("RVal")


def test_check_both_engines():
    trace = read("monotonic_reads_violation.trace")
    direct = cmcheck.check(trace, "MonotonicReads")
    assert direct["holds"] is False
    assert set(direct["witness"]) == {"a", "b", "c"}
    automata = cmcheck.check(trace, "MonotonicReads", engine="automata", k=0)
    assert automata["holds"] is False
    assert cmcheck.check(read("fig1.trace"), "RealTime")["holds"] is True


def test_evaluate_and_validate():
    trace = read("fig1.trace")
    assert cmcheck.evaluate(trace, "forall1 a. a.stime < a.rtime")
    assert cmcheck.validate(trace) == []
    problems = cmcheck.validate(read("invalid_overlap.trace"))
    assert any("disjoint" in p for p in problems)


def test_encode_running_example_timeline():
    rows = cmcheck.encode(read("fig1.trace"), timeline=True)
    assert rows[:4] == ["000", "100", "110", "010"]
    assert len(rows) == 13


def test_graph_bound():
    g = cmcheck.graph(read("fig1.trace"), exact=True)
    assert g["cutwidth_ord"] <= g["bound"] == 18
    assert g["cutwidth_exact"] <= g["cutwidth_ord"]
    assert ("a", "b") in g["edges"]


def test_sat_returns_a_checkable_witness():
    witness = cmcheck.sat("exists1 a. exists1 b. rb(a,b) & b.type = read", processes=1, values=1)
    assert witness is not None
    assert cmcheck.evaluate(witness, "exists1 a. exists1 b. rb(a,b)")
    assert cmcheck.sat("exists1 a. a.stime < a.stime") is None


def test_implies():
    assert cmcheck.implies("Linearizability", "RealTime")["counterexample"] is None
    r = cmcheck.implies("ReadYourWrites", "MonotonicReads")
    assert r["counterexample"] is not None and r["confirmed"]


def test_generate_and_json():
    text = cmcheck.generate(3, processes=2, ops=5, exec=True, k=1)
    assert cmcheck.validate(text) == []
    assert json.loads(cmcheck.to_json(text))
    assert cmcheck.generate(3, ops=5) == cmcheck.generate(3, ops=5)


def test_errors_are_typed():
    with pytest.raises(cmcheck.FormulaError):
        cmcheck.sat("exists1 a.")
    with pytest.raises(cmcheck.CmcError):
        cmcheck.check(read("fig1.trace"), "NoSuchModel")
    with pytest.raises(cmcheck.CapExceeded):
        cmcheck.sat("forall1 a. exists1 b. rb(a,b) | rb(b,a)", max_states=5)
