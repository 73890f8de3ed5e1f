"""Pretty-printer producing surface syntax that the parser reads back"""

from models.terms import (
    Var, Const, Pair, App, Empty, Ext, Ris, Truth, And, Or, SetEq, In, NotIn,
    Subset, IsSet, IsX, TheoryLit, Call, Neg, Implies, Foreach, Exists,
    Definition, Program, split_ext,
)

INFIX_PREDICATES = ('=', 'neq', '=<', '<', '>=', '>')

# formula precedence: implies < or < and < unit
_IMPLIES, _OR, _AND, _UNIT = 1, 2, 3, 4
_ARITH = {'+': 1, '-': 1, '*': 2}


def pretty(obj):
    """Render a program, definition, formula or term"""
    if isinstance(obj, Program):
        return format_program(obj)
    if isinstance(obj, Definition):
        return format_definition(obj)
    if isinstance(obj, (Var, Const, Pair, App, Empty, Ext, Ris)):
        return format_term(obj)
    return format_formula(obj)


def format_program(program):
    lines = [format_definition(d) for d in program.definitions]
    lines.append(format_formula(program.query) + ".")
    return "\n".join(lines) + "\n"


def format_definition(d):
    params = ",".join(format_term(p) for p in d.params)
    return f"{d.name}({params}) :- {format_formula(d.body)}."


def format_term(t, level=0):
    if isinstance(t, Var):
        return str(t)
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Pair):
        return f"[{format_term(t.left)},{format_term(t.right)}]"
    if isinstance(t, App):
        if t.fn in _ARITH and len(t.args) == 2:
            prec = _ARITH[t.fn]
            left = format_term(t.args[0], prec)
            right = format_term(t.args[1], prec + 1)
            text = f"{left} {t.fn} {right}"
            return f"({text})" if prec < level else text
        return f"{t.fn}(" + ",".join(format_term(a) for a in t.args) + ")"
    if isinstance(t, Empty):
        return "{}"
    if isinstance(t, Ext):
        elems, tail = split_ext(t)
        body = ",".join(format_term(e) for e in elems)
        if isinstance(tail, Empty):
            return "{" + body + "}"
        return "{" + body + " / " + format_term(tail) + "}"
    if isinstance(t, Ris):
        text = f"{{{format_term(t.ctrl)} : {format_term(t.dom)} | {format_formula(t.filter)}"
        if t.is_extended:
            locals_ = ",".join(format_term(v) for v in t.locals)
            text += f" ; [{locals_}], {format_formula(t.fpreds)}"
        return text + "}"
    raise TypeError(f"not a term: {t!r}")


def format_formula(f, level=_IMPLIES):
    if isinstance(f, Implies):
        text = f"{format_formula(f.lhs, _OR)} implies {format_formula(f.rhs, _IMPLIES)}"
        return _wrap(text, _IMPLIES, level)
    if isinstance(f, Or):
        text = " or ".join(format_formula(item, _AND) for item in f.items)
        return _wrap(text, _OR, level)
    if isinstance(f, And):
        text = " & ".join(format_formula(item, _UNIT) for item in f.items)
        return _wrap(text, _AND, level)
    return _format_unit(f)


def _wrap(text, prec, level):
    return f"({text})" if prec < level else text


def _format_unit(f):
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Neg):
        return f"neg({format_formula(f.body)})"
    if isinstance(f, SetEq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, In):
        return f"{format_term(f.elem)} in {format_term(f.set)}"
    if isinstance(f, NotIn):
        return f"{format_term(f.elem)} nin {format_term(f.set)}"
    if isinstance(f, TheoryLit):
        if f.pred in INFIX_PREDICATES and len(f.args) == 2:
            return f"{format_term(f.args[0])} {f.pred} {format_term(f.args[1])}"
        return f"{f.pred}(" + ",".join(format_term(a) for a in f.args) + ")"
    if isinstance(f, Call):
        return f"{f.name}(" + ",".join(format_term(a) for a in f.args) + ")"
    if isinstance(f, (Foreach, Exists)):
        return _format_quantifier(f)
    if isinstance(f, Subset):
        ris = f.ris
        if ris.is_extended:
            return _format_quantifier(Foreach(ris.ctrl, f.dom, ris.filter, ris.locals, ris.fpreds))
        return (f"subset({format_term(f.dom)}, {{{format_term(ris.ctrl)} : "
                f"{format_term(ris.dom)} | {format_formula(ris.filter)}}})")
    if isinstance(f, IsSet):
        return f"set({format_term(f.term)})"
    if isinstance(f, IsX):
        return f"isX({format_term(f.term)})"
    raise TypeError(f"not a formula: {f!r}")


def _format_quantifier(q):
    keyword = "foreach" if isinstance(q, Foreach) else "exists"
    binders = [(q.ctrl, q.dom)]
    node = q
    # collapse directly nested quantifiers of the same kind into one binder list
    while not node.is_extended and type(node.filter) is type(q):
        node = node.filter
        binders.append((node.ctrl, node.dom))
    parts = [f"{format_term(c)} in {format_term(d)}" for c, d in binders]
    binder = parts[0] if len(parts) == 1 else "[" + ", ".join(parts) + "]"
    if node.is_extended:
        locals_ = ",".join(format_term(v) for v in node.locals)
        return (f"{keyword}({binder}, [{locals_}], {format_formula(node.filter)}, "
                f"{format_formula(node.fpreds)})")
    return f"{keyword}({binder}, {format_formula(node.filter)})"
