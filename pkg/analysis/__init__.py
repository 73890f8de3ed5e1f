"""Analysis package: definitions, desugaring, negation, fragments and the oracle"""
