"""Text and JSON reports for verdicts, answers and fragment classifications"""

import json

from models.substitution import apply_subst, ordered_free_vars
from models.terms import Var, SetEq
from models.values import format_value
from ui.printer import pretty


def renumbering(terms):
    """Map generated variables to _N1, _N2, ... in order of first appearance"""
    mapping = {}
    for t in terms:
        for v in ordered_free_vars(t):
            if v.is_fresh and v not in mapping:
                mapping[v] = Var(v.name, v.sort, len(mapping) + 1)
    return mapping


def answer_lines(answer, variables):
    """(bindings, constraints, values) of an answer as printable strings.

    Only the query's own variables are shown; generated variables are
    renumbered consistently across the three lists.
    """
    shown = [v for v in variables if not v.is_fresh]
    bound = [v for v in shown if v in answer.bindings]
    residue = [c for c in answer.constraints
               if not (isinstance(c, SetEq) and c.left in answer.bindings)]
    mapping = renumbering([answer.bindings[v] for v in bound] + residue)
    bindings = [(str(v), pretty(apply_subst(mapping, answer.bindings[v]))) for v in bound]
    constraints = [pretty(apply_subst(mapping, c)) for c in residue]
    values = [(str(v), format_value(answer.valuation[v])) for v in shown if v in answer.valuation]
    return bindings, constraints, values


def format_answer(answer, variables, index=None):
    bindings, constraints, values = answer_lines(answer, variables)
    lines = [] if index is None else [f"answer {index}:"]
    if bindings:
        lines.append("  bindings:")
        lines += [f"    {name} = {text}" for name, text in bindings]
    if constraints:
        lines.append("  constraints:")
        lines += [f"    {text}" for text in constraints]
    if values:
        lines.append("  values:")
        lines += [f"    {name} = {text}" for name, text in values]
    return "\n".join(lines)


def format_verdict(verdict, answers=(), variables=()):
    """Text report: the status line followed by the answers, if any"""
    status = verdict.status
    if status == 'unknown':
        return (f"unknown: {verdict.reason} "
                f"({verdict.live_branches} live branch{'es' if verdict.live_branches != 1 else ''})")
    if status == 'counterexample':
        return "counterexample\n" + format_answer(verdict.answer, variables)
    lines = [status]
    if len(answers) == 1:
        lines.append(format_answer(answers[0], variables))
    else:
        lines += [format_answer(a, variables, i) for i, a in enumerate(answers, start=1)]
    return "\n".join(line for line in lines if line)


def answer_json(answer, variables):
    bindings, constraints, values = answer_lines(answer, variables)
    return {
        'bindings': dict(bindings),
        'constraints': constraints,
        'valuation': dict(values),
    }


def verdict_json(verdict, answers=(), variables=(), fragment=None):
    report = {'status': verdict.status}
    if verdict.status == 'unknown':
        report['reason'] = verdict.reason
        report['live_branches'] = verdict.live_branches
    elif verdict.status == 'counterexample':
        report['counterexample'] = answer_json(verdict.answer, variables)
    elif answers:
        report['answers'] = [answer_json(a, variables) for a in answers]
    if fragment is not None:
        report['fragment'] = fragment.name
    return json.dumps(report, ensure_ascii=False, indent=2)


# ------------------------------------------------------------- classification

def format_classification(verdict):
    lines = [f"fragment: {verdict.name}"]
    if verdict.branches > 1:
        lines.append(f"branches: {verdict.branches}")
    if verdict.graph.nodes:
        lines.append("nodes: " + " ".join(str(n) for n in verdict.graph.nodes))
    for a, b in verdict.graph.edges:
        lines.append(f"edge: {a} -> {b}")
    if verdict.loop:
        lines.append("loop: " + " -> ".join(str(n) for n in verdict.loop))
    lines += [f"warning: {w}" for w in verdict.warnings]
    return "\n".join(lines)


def classification_json(verdict):
    return json.dumps({
        'fragment': verdict.name,
        'terminates': verdict.fragment.terminates,
        'branches': verdict.branches,
        'nodes': [str(n) for n in verdict.graph.nodes],
        'edges': [[str(a), str(b)] for a, b in verdict.graph.edges],
        'loop': [str(n) for n in verdict.loop],
        'warnings': list(verdict.warnings),
    }, ensure_ascii=False, indent=2)


def display_verdict(verdict, answers=(), variables=(), as_json=False, fragment=None):
    if as_json:
        print(verdict_json(verdict, answers, variables, fragment))
    else:
        print(format_verdict(verdict, answers, variables))


def display_classification(verdict, as_json=False):
    print(classification_json(verdict) if as_json else format_classification(verdict))
