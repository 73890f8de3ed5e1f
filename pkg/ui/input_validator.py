"""Validation of parsed programs"""

from models.errors import DefinitionError
from models.terms import (
    And, Or, Neg, Implies, Foreach, Exists, Call, Subset,
)


def calls_in(f):
    """Calls to user predicates occurring anywhere in f"""
    if isinstance(f, Call):
        return [f]
    if isinstance(f, (And, Or)):
        return [c for item in f.items for c in calls_in(item)]
    if isinstance(f, Neg):
        return calls_in(f.body)
    if isinstance(f, Implies):
        return calls_in(f.lhs) + calls_in(f.rhs)
    if isinstance(f, (Foreach, Exists)):
        return calls_in(f.filter) + calls_in(f.fpreds)
    if isinstance(f, Subset):
        return calls_in(f.ris.filter) + calls_in(f.ris.fpreds)
    return []


class ProgramValidator:
    """Validates predicate definitions of a program"""

    def validate_unique_names(self, program):
        """
        Definition names must be unique

        Raises:
            DefinitionError: If a name is defined twice
        """
        seen = set()
        for d in program.definitions:
            if d.name in seen:
                raise DefinitionError(f"predicate {d.name} is defined more than once")
            seen.add(d.name)
        return True

    def validate_arities(self, program):
        """
        Every call to a defined predicate passes as many arguments as it has parameters

        Raises:
            DefinitionError: On an arity mismatch
        """
        arity = {d.name: len(d.params) for d in program.definitions}
        bodies = [d.body for d in program.definitions] + [program.query]
        for body in bodies:
            for call in calls_in(body):
                if call.name in arity and len(call.args) != arity[call.name]:
                    raise DefinitionError(
                        f"{call.name} expects {arity[call.name]} arguments, got {len(call.args)}"
                    )
        return True

    def validate_acyclic(self, program):
        """
        The call graph between definitions has no cycle

        Raises:
            DefinitionError: With the cycle, e.g. "p -> q -> p"
        """
        graph = {
            d.name: sorted({c.name for c in calls_in(d.body)})
            for d in program.definitions
        }
        state = {}

        def visit(name, path):
            state[name] = 'active'
            for callee in graph.get(name, []):
                if callee not in graph:
                    continue
                if state.get(callee) == 'active':
                    cycle = path[path.index(callee):] + [callee]
                    raise DefinitionError("recursive definition: " + " -> ".join(cycle))
                if callee not in state:
                    visit(callee, path + [callee])
            state[name] = 'done'

        for name in graph:
            if name not in state:
                visit(name, [name])
        return True

    def validate_program(self, program):
        self.validate_unique_names(program)
        self.validate_arities(program)
        self.validate_acyclic(program)
        return True
