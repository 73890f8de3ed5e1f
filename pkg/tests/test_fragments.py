"""Tests for fragment classification and the domain graph"""

from pathlib import Path

from analysis.desugar import normalize
from analysis.fragments import (
    Fragment, classify, build_domain_graph, find_loop, join, dnf_branches,
)
from models.theory_lia import LinearArithmeticTheory
from ui.parser import parse, parse_formula

SAMPLES = Path(__file__).parent.parent / 'samples'
LIA = LinearArithmeticTheory()


def classify_text(text):
    return classify(normalize(parse_formula(text), LIA))


def classify_sample(name):
    return classify(normalize(parse((SAMPLES / name).read_text()).query, LIA))


def test_join_table():
    assert join(Fragment.FORALL, Fragment.FORALL) is Fragment.FORALL
    assert join(Fragment.FORALL, Fragment.EXISTS) is Fragment.EXISTS_FORALL
    assert join(Fragment.EXISTS_FORALL, Fragment.FORALL_EXISTS) is Fragment.FORALL_EXISTS
    assert join(Fragment.FORALL, Fragment.OUTSIDE) is Fragment.OUTSIDE
    assert join(None, Fragment.EXISTS) is Fragment.EXISTS


def test_simple_fragments():
    assert classify_text("X = 1").fragment is Fragment.FORALL, "No quantifier at all"
    assert classify_text("foreach(X in A, X > 0)").fragment is Fragment.FORALL
    assert classify_text("X in A").fragment is Fragment.EXISTS, "Membership acts as an exists"
    both = classify_text("foreach(X in A, X > 0) & exists(Y in B, Y > 0)")
    assert both.fragment is Fragment.EXISTS_FORALL


def test_sample_fragments():
    assert classify_sample('min.slog').name == 'PhiExistsForall'
    assert classify_sample('exists_foreach.slog').name == 'PhiExistsForall'
    assert classify_sample('nested_foreach.slog').name == 'PhiForall'


def test_forall_exists_without_loop():
    verdict = classify_text("foreach(X in A, exists(Y in B, X = Y))")
    assert verdict.fragment is Fragment.FORALL_EXISTS
    assert verdict.loop == ()
    assert verdict.fragment.terminates


def test_loop_inside_one_conjunct():
    """The exists adds elements to the domain of the enclosing foreach"""
    verdict = classify_sample('ex_undec.slog')
    assert verdict.fragment is Fragment.OUTSIDE
    assert [str(n) for n in verdict.loop] == ["((1,1),(∀,A))", "((1,2),(∃,A))"]
    assert not verdict.fragment.terminates


def test_loop_through_two_conjuncts():
    verdict = classify_sample('ex_undec2.slog')
    assert verdict.name == 'Outside'
    nodes = [str(n) for n in verdict.graph.nodes]
    assert nodes == ["((1,1),(∀,A))", "((1,2),(∃,B))", "((2,1),(∀,B))", "((2,2),(∃,A))"]
    edges = [(str(a), str(b)) for a, b in verdict.graph.edges]
    assert edges == [
        ("((1,1),(∀,A))", "((1,2),(∃,B))"),
        ("((2,1),(∀,B))", "((2,2),(∃,A))"),
        ("((1,2),(∃,B))", "((2,1),(∀,B))"),
        ("((2,2),(∃,A))", "((1,1),(∀,A))"),
    ]
    assert [str(n) for n in verdict.loop] == nodes


def test_set_equation_merges_domains():
    """With A = B the foreach over A and the exists over B close a loop"""
    open_ = classify_text("foreach(X in A, exists(Y in B, X = Y))")
    closed = classify_text("foreach(X in A, exists(Y in B, X = Y)) & A = B")
    assert open_.fragment is Fragment.FORALL_EXISTS
    assert closed.fragment is Fragment.OUTSIDE


def test_bound_domain_warns():
    verdict = classify_text("foreach(X in A, foreach(Y in X, Y > 0))")
    assert verdict.warnings, "A quantified variable used as a domain should warn"
    assert "X" in verdict.warnings[0]


def test_disjunctive_branches():
    verdict = classify_text("foreach(X in A, X > 0) or exists(Y in B, Y > 0)")
    assert verdict.branches == 2
    assert verdict.fragment.terminates
    assert len(dnf_branches(parse_formula("(X in A or X in B) & (Y in A or Y in B)"))) == 4


def test_graph_without_variable_domains():
    graph = build_domain_graph(parse_formula("foreach(X in {1,2}, X > 0)"))
    assert graph.nodes == [] and find_loop(graph) == ()


def test_membership_in_a_filter_grows_the_domain():
    """X + 1 in A inside foreach over A keeps adding elements to A"""
    verdict = classify_text("0 in A & foreach(X in A, X + 1 in A)")
    assert verdict.fragment is Fragment.OUTSIDE, f"Expected Outside, got {verdict.name}"
    assert [str(n) for n in verdict.loop] == ["((2,1),(∀,A))", "((2,2),(∃,A))"]


def test_membership_in_a_filter_over_another_domain():
    assert classify_sample('perms_dom.slog').fragment is Fragment.FORALL_EXISTS
    verdict = classify_text("foreach(X in A, X in B)")
    assert verdict.fragment is Fragment.FORALL_EXISTS
    assert verdict.loop == ()


def test_set_equation_in_a_filter():
    verdict = classify_text("foreach(X in A, A = {X / B})")
    assert verdict.fragment is Fragment.OUTSIDE
    assert classify_text("exists(W in {5}, B = {W / D})").fragment is Fragment.EXISTS
