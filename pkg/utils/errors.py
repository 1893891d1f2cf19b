"""
Error types shared by every module.
Services raise these; the command line maps them to exit codes.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class InputError(ToolkitError):
    """Invalid user input (bad Seifert pair, determinant, index...)."""


class ParseError(InputError):
    """Syntax error in a manifold or pairing literal."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        """
        Initialize the parse error.

        Args:
            message: What went wrong
            text: The full input text
            position: Offset of the offending character in text
        """
        self.text = text
        self.position = position
        self.line = text.count("\n", 0, position) + 1
        self.column = position - (text.rfind("\n", 0, position) + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")


class SingularPairingError(ToolkitError):
    """The pairing is not nonsingular."""


class UndecidedError(ToolkitError):
    """Invariants are inconclusive and the group is above the oracle bound."""


class OracleBoundError(ToolkitError):
    """A brute-force enumeration was requested above its bound."""


class UnsupportedError(ToolkitError):
    """The input lies outside the cases a formula covers."""


class InadmissiblePairingError(ToolkitError):
    """A pairing cannot be realized; carries the failed admissibility clause."""

    def __init__(self, clause: str):
        self.clause = clause
        super().__init__(clause)
