"""Parser for the .slog surface language

    inv(Usr,Adm) :- foreach([U in Usr, A in Adm], U neq A).
    addUsr(Usr,Adm,X,Usr_,Adm_) :- Usr_ = {X / Usr} & Adm_ = Adm.
    neg(inv(Usr,Adm) & addUsr(Usr,Adm,X,Usr_,Adm_) implies inv(Usr_,Adm_)).

Variables start uppercase, atoms lowercase, `%` starts a line comment.
Generated variables print as _N<k>; the leading underscore is not a
valid token, so they can never be written in user input.
"""

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError, LarkError

from models.errors import ParseError, DesugarError
from models.terms import (
    Var, Const, Pair, App, EMPTY, Empty, Ext, TRUE, FALSE, SetEq, In, NotIn,
    TheoryLit, Call, Neg, Implies, Foreach, Exists, Definition, Program,
    And, Or, ext, ctrl_vars,
)

GRAMMAR = r"""
    start: (definition ".")* formula "."

    definition: ATOM "(" [varlist] ")" ":-" formula
    varlist: VAR ("," VAR)*

    ?formula: disj
            | disj "implies" formula                  -> implies
    ?disj: conj
         | disj "or" conj                             -> or_
    ?conj: unit
         | conj "&" unit                              -> and_
    ?unit: "neg" "(" formula ")"                      -> neg
         | "(" formula ")"
         | "true"                                     -> true
         | "false"                                    -> false
         | sum rel sum                                -> relation
         | "subset" "(" sum "," ris ")"               -> subset
         | "foreach" "(" binder "," quant_rest ")"    -> foreach
         | "exists" "(" binder "," quant_rest ")"     -> exists
         | ATOM "(" [termlist] ")"                    -> call

    !rel: "=" | "neq" | "in" | "nin" | "=<" | "<" | ">=" | ">"

    ris: "{" ctrl ":" sum "|" formula "}"
    binder: ctrl "in" sum                             -> single_binder
          | "[" ctrl "in" sum ("," ctrl "in" sum)* "]" -> multi_binder
    quant_rest: formula                               -> plain_rest
              | "[" [varlist] "]" "," formula "," formula -> extended_rest
    ctrl: VAR                                         -> ctrl_var
        | "[" ctrl "," ctrl "]"                       -> ctrl_pair

    ?sum: product
        | sum "+" product                             -> add
        | sum "-" product                             -> sub
    ?product: atom_term
            | product "*" atom_term                   -> mul
    ?atom_term: VAR                                   -> var
              | ATOM                                  -> atom
              | INT                                   -> int
              | "-" INT                               -> neg_int
              | "[" sum "," sum "]"                   -> pair
              | "{" "}"                               -> empty
              | "{" termlist ["/" sum] "}"            -> setext
    termlist: sum ("," sum)*

    VAR: /[A-Z][A-Za-z0-9_]*/
    ATOM: /(?!(in|nin|neq|or|neg|implies|foreach|exists|subset|true|false)\b)[a-z][A-Za-z0-9_]*/
    INT: /[0-9]+/
    COMMENT: /%[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_parser = Lark(
    GRAMMAR,
    parser='earley',
    lexer='basic',
    propagate_positions=True,
    maybe_placeholders=True,
    start=['start', 'formula', 'sum'],
)


def _position(meta):
    return getattr(meta, 'line', None), getattr(meta, 'column', None)


def _check_ctrl(ctrl, meta):
    names = ctrl_vars(ctrl)
    if len(set(names)) != len(names):
        line, column = _position(meta)
        raise ParseError("control term variables must be distinct", line, column)


def _quantifier(cls, binders, rest, meta):
    """Nest a multi-binder quantifier outermost-first"""
    kind = rest[0]
    ctrl, dom = binders[-1]
    if kind == 'plain':
        node = cls(ctrl, dom, rest[1])
    else:
        locals_, filter_, fpreds = rest[1], rest[2], rest[3]
        overlap = set(locals_) & set(ctrl_vars(ctrl))
        if overlap:
            line, column = _position(meta)
            raise ParseError("local variables must differ from control variables", line, column)
        node = cls(ctrl, dom, filter_, tuple(locals_), fpreds)
    for ctrl, dom in reversed(binders[:-1]):
        node = cls(ctrl, dom, node)
    return node


def _is_set_term(t):
    return isinstance(t, (Empty, Ext))


def _is_element_term(t):
    return isinstance(t, (Const, Pair, App))


class _ToAst(Transformer):
    """Turns the lark parse tree into core-terms nodes"""

    # -- program -------------------------------------------------------------

    def start(self, children):
        *definitions, query = children
        return Program(tuple(definitions), query)

    @v_args(meta=True)
    def definition(self, meta, children):
        name, params, body = children
        params = tuple(params or ())
        if len(set(params)) != len(params):
            line, column = _position(meta)
            raise ParseError(f"parameters of {name} must be distinct", line, column)
        return Definition(str(name), params, body)

    def varlist(self, children):
        return [Var(str(tok)) for tok in children]

    # -- formulas ------------------------------------------------------------

    def implies(self, children):
        return Implies(children[0], children[1])

    def or_(self, children):
        return _flatten(Or, children)

    def and_(self, children):
        return _flatten(And, children)

    def neg(self, children):
        return Neg(children[0])

    def true(self, _):
        return TRUE

    def false(self, _):
        return FALSE

    def rel(self, children):
        return str(children[0])

    def relation(self, children):
        left, op, right = children
        if op == 'in':
            return In(left, right)
        if op == 'nin':
            return NotIn(left, right)
        if op == '=':
            if _is_set_term(left) or _is_set_term(right):
                return SetEq(left, right)
            if _is_element_term(left) or _is_element_term(right):
                return TheoryLit('=', (left, right))
            return SetEq(left, right)
        return TheoryLit(op, (left, right))

    @v_args(meta=True)
    def subset(self, meta, children):
        dom, (ctrl, ris_dom, filter_) = children
        if ris_dom != dom:
            line, column = _position(meta)
            raise DesugarError(
                f"line {line}, column {column}: subset needs a RIS over its first "
                f"argument ({{X : A | ...}} with A identical to the first argument)"
            )
        return Foreach(ctrl, dom, filter_)

    @v_args(meta=True)
    def ris(self, meta, children):
        ctrl, dom, filter_ = children
        _check_ctrl(ctrl, meta)
        return (ctrl, dom, filter_)

    @v_args(meta=True)
    def foreach(self, meta, children):
        return _quantifier(Foreach, children[0], children[1], meta)

    @v_args(meta=True)
    def exists(self, meta, children):
        return _quantifier(Exists, children[0], children[1], meta)

    def call(self, children):
        name, args = children
        return Call(str(name), tuple(args or ()))

    @v_args(meta=True)
    def single_binder(self, meta, children):
        ctrl, dom = children
        _check_ctrl(ctrl, meta)
        return [(ctrl, dom)]

    @v_args(meta=True)
    def multi_binder(self, meta, children):
        binders = list(zip(children[0::2], children[1::2]))
        for ctrl, _ in binders:
            _check_ctrl(ctrl, meta)
        return binders

    def plain_rest(self, children):
        return ('plain', children[0])

    def extended_rest(self, children):
        locals_, filter_, fpreds = children
        return ('extended', list(locals_ or ()), filter_, fpreds)

    def ctrl_var(self, children):
        return Var(str(children[0]))

    def ctrl_pair(self, children):
        return Pair(children[0], children[1])

    # -- terms ---------------------------------------------------------------

    def add(self, children):
        return App('+', (children[0], children[1]))

    def sub(self, children):
        return App('-', (children[0], children[1]))

    def mul(self, children):
        return App('*', (children[0], children[1]))

    def var(self, children):
        return Var(str(children[0]))

    def atom(self, children):
        return Const(str(children[0]))

    def int(self, children):
        return Const(int(children[0]))

    def neg_int(self, children):
        return Const(-int(children[0]))

    def pair(self, children):
        return Pair(children[0], children[1])

    def empty(self, _):
        return EMPTY

    def setext(self, children):
        elems, tail = children
        return ext(elems, EMPTY if tail is None else tail)

    def termlist(self, children):
        return list(children)


def _flatten(cls, children):
    items = []
    for c in children:
        items.extend(c.items if isinstance(c, cls) else [c])
    return cls(tuple(items))


def _run(text, start):
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise ParseError(f"input is not UTF-8: {e}")
    try:
        tree = _parser.parse(text, start=start)
        return _ToAst().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ValueError):
            raise e.orig_exc
        raise ParseError(f"malformed input: {e.orig_exc}")
    except UnexpectedInput as e:
        raise ParseError(_describe(e), e.line, e.column)
    except LarkError as e:
        raise ParseError(str(e))
    except RecursionError:
        raise ParseError("input nested too deeply")


def _describe(e):
    token = getattr(e, 'token', None)
    if token is not None:
        if token.type == '$END':
            return "unexpected end of input"
        return f"unexpected token {str(token)!r}"
    char = getattr(e, 'char', None)
    if char is not None:
        return f"unexpected character {char!r}"
    return "syntax error"


def parse(text):
    """Parse a program: definitions followed by a query, each ending in '.'

    Raises:
        ParseError: syntax error (with line and column)
        DefinitionError: duplicate or recursive definitions
        DesugarError: subset whose second argument is not a RIS over the first
    """
    from ui.input_validator import ProgramValidator

    program = _run(text, 'start')
    ProgramValidator().validate_program(program)
    return program


def parse_formula(text):
    """Parse a single formula (no trailing '.')"""
    return _run(text, 'formula')


def parse_term(text):
    """Parse a single term, e.g. a value printed in an answer"""
    return _run(text, 'sum')


def term_value(term):
    """Concrete value of a ground term: atoms, integers, pairs and finite sets

    Raises:
        ParseError: if the term contains a variable or a function application
    """
    if isinstance(term, Const):
        return term.value
    if isinstance(term, Pair):
        return (term_value(term.left), term_value(term.right))
    if isinstance(term, Empty):
        return frozenset()
    if isinstance(term, Ext):
        return term_value(term.rest) | {term_value(term.elem)}
    raise ParseError(f"not a ground value: {term!r}")
