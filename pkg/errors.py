"""Exception hierarchy shared by every module.

Input-validation failures also derive from ValueError so callers that only
know the standard library can still catch them.
"""


class CayleyError(Exception):
    """Base class for all errors raised by this package."""


# Group tables

class GroupTableError(CayleyError, ValueError):
    pass


class NotLatinSquare(GroupTableError):
    def __init__(self, kind, index, value):
        self.kind = kind
        self.index = index
        self.value = value
        super().__init__(f"Latin square law violated: {kind} {index} repeats element {value}")


class NoIdentityAtIndexZero(GroupTableError):
    def __init__(self, row, col):
        self.row = row
        self.col = col
        super().__init__(f"identity law violated at ({row}, {col}): element 0 must be the identity")


class NotAssociative(GroupTableError):
    def __init__(self, a, b, c):
        self.triple = (a, b, c)
        super().__init__(f"associativity violated for ({a}, {b}, {c})")


class DuplicateLabel(GroupTableError):
    def __init__(self, label, first, second):
        self.label = label
        super().__init__(f"label {label!r} used by elements {first} and {second}")


class ReservedLabelX(GroupTableError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"element {index} uses the reserved label 'x'")


class InvalidLabel(GroupTableError):
    def __init__(self, label, index):
        self.label = label
        self.index = index
        super().__init__(f"element {index} has invalid label {label!r} "
                         "(labels must be non-empty and free of whitespace, '^', '(' and ')')")


class GroupFileError(GroupTableError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class UnknownName(CayleyError, KeyError):
    def __init__(self, name, known):
        self.name = name
        super().__init__(f"unknown builtin group {name!r}; known: {', '.join(known)}")

    def __str__(self):
        return self.args[0]


class GroupMismatch(CayleyError, ValueError):
    pass


class ClassTooHigh(CayleyError):
    def __init__(self, group_name, witness):
        self.witness = witness
        super().__init__(f"group {group_name} has nilpotency class > 2 "
                         f"(commutator of {witness[0]}, {witness[1]} does not commute with {witness[2]})")


# Coefficients

class IndexOutOfRange(CayleyError, IndexError):
    pass


class CoeffRangeExceeded(CayleyError):
    pass


# Machines

class NotInvertible(CayleyError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"state {state} does not permute the alphabet")


class AlphabetMismatch(CayleyError, ValueError):
    pass


class StateBudgetExceeded(CayleyError):
    def __init__(self, budget):
        self.budget = budget
        super().__init__(f"product machine exceeds the state budget of {budget} reachable states")


class LetterOutOfRange(CayleyError, ValueError):
    pass


class ActionCostExceeded(CayleyError):
    def __init__(self, cost, budget):
        self.cost = cost
        self.budget = budget
        super().__init__(f"action oracle needs {cost} words, above the budget of {budget}")


# Words

class WordSyntaxError(CayleyError, ValueError):
    def __init__(self, position, message):
        self.position = position
        super().__init__(f"syntax error at position {position}: {message}")


class UnknownLabel(CayleyError, ValueError):
    def __init__(self, label, position=None):
        self.label = label
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"unknown group label {label!r}{where}")


class ZeroExponent(CayleyError, ValueError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"zero exponent at position {position}")
