"""Registry of the bundled element theories"""

from models.theory_eq import EqualityTheory
from models.theory_lia import LinearArithmeticTheory

# name -> zero-argument factory
THEORY_FACTORIES = {
    'eq': EqualityTheory,
    'lia': LinearArithmeticTheory,
}


def register_theory(name, factory):
    """Make a third-party theory selectable by name"""
    if name in THEORY_FACTORIES:
        raise ValueError(f"Theory already registered: {name}")
    THEORY_FACTORIES[name] = factory


def load_theory(theory_choice):
    """Instantiate the theory selected by name"""
    factory = THEORY_FACTORIES.get(theory_choice)
    if factory is None:
        known = ", ".join(sorted(THEORY_FACTORIES))
        raise ValueError(f"Unknown theory: {theory_choice} (available: {known})")
    return factory()
