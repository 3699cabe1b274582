"""Error taxonomy shared by all modules.

InputError maps to CLI exit code 1, NumericError to exit code 2.
"""


class InputError(ValueError):
    """Invalid arguments, malformed files, or violated preconditions."""


class NumericError(ArithmeticError):
    """Non-finite values or failed numerical routines at run time."""
