class SynthesisError(Exception):
    """Base class for every error raised by the synthesis engine."""

    exit_code = 1

    def __init__(self, message="Synthesis failed."):
        self.message = message
        super().__init__(self.message)


# ----------------------
# Decision-diagram kernel
# ----------------------
class DiagramError(SynthesisError):
    """Exception raised when a diagram operation receives invalid operands."""

    def __init__(self, message="Invalid decision-diagram operation."):
        super().__init__(message)


class ManagerMismatchError(DiagramError):
    """Exception raised when operands belong to different managers."""

    def __init__(self, message="Operands belong to different managers."):
        super().__init__(message)


class VariableBudgetExceeded(DiagramError):
    """Exception raised when a manager runs out of variables."""

    exit_code = 3

    def __init__(self, message="Variable budget exceeded."):
        super().__init__(message)


class NonBooleanOperandError(DiagramError):
    """Exception raised when a boolean operation receives a numeric diagram."""

    def __init__(self, message="Boolean operation applied to a non-boolean diagram."):
        super().__init__(message)


class DuplicateSubstitutionError(DiagramError):
    """Exception raised when a vector substitution targets a variable twice."""

    def __init__(self, message="Variable substituted more than once."):
        super().__init__(message)


class IncompleteAssignmentError(DiagramError):
    """Exception raised when an assignment misses a variable in the support."""

    def __init__(self, message="Assignment does not cover the diagram support."):
        super().__init__(message)


# ----------------------
# Front ends
# ----------------------
class FormulaSyntaxError(SynthesisError):
    """Exception raised when an LTLf formula cannot be parsed."""

    def __init__(self, message="Formula syntax error.", position: int = 0):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class UndeclaredAtomError(SynthesisError):
    """Exception raised when a formula uses a proposition that is not declared."""

    def __init__(self, message="Formula uses an undeclared proposition."):
        super().__init__(message)


class AtomCapExceeded(SynthesisError):
    """Exception raised when a formula has more atoms than the DFA builder allows."""

    exit_code = 3

    def __init__(self, message="Too many atoms for DFA construction."):
        super().__init__(message)


class SchemaViolationError(SynthesisError):
    """Exception raised when an instance file does not match the schema."""

    def __init__(self, message="Instance does not match the schema.", pointer: str = ""):
        self.pointer = pointer
        super().__init__(f"{message} at '{pointer}'" if pointer else message)


class DanglingIdError(SchemaViolationError):
    """Exception raised when an instance references an unknown id."""

    def __init__(self, message="Instance references an unknown id.", pointer: str = ""):
        super().__init__(message, pointer)


class UnsupportedPddlFeature(SynthesisError):
    """Exception raised when a PDDL file uses a construct outside the STRIPS subset."""

    def __init__(self, construct: str = "unknown"):
        self.construct = construct
        super().__init__(f"Unsupported PDDL construct: {construct}")


class UngroundableParameterError(SynthesisError):
    """Exception raised when an action parameter has no object of its type."""

    def __init__(self, message="Action parameter cannot be grounded."):
        super().__init__(message)


# ----------------------
# Construction caps
# ----------------------
class StateCapExceeded(SynthesisError):
    """Exception raised when a game or product grows beyond the configured cap."""

    exit_code = 3

    def __init__(self, message="State cap exceeded.", count_estimate: int = 0):
        self.count_estimate = count_estimate
        super().__init__(message)


class BitBudgetExceeded(SynthesisError):
    """Exception raised when an encoding block needs more bits than allowed."""

    exit_code = 3

    def __init__(self, message="Bit budget exceeded."):
        super().__init__(message)


class OracleSizeExceeded(SynthesisError):
    """Exception raised when the brute-force oracle is asked to solve a large game."""

    exit_code = 3

    def __init__(self, message="Instance too large for the brute-force oracle."):
        super().__init__(message)


# ----------------------
# Solving
# ----------------------
class DivergenceError(SynthesisError):
    """Exception raised when a fixpoint does not settle within its iteration cap."""

    def __init__(self, message="Value iteration did not converge."):
        super().__init__(message)


class StrategyUndefinedError(SynthesisError):
    """Exception raised when a rollout reaches a state the strategy does not cover."""

    def __init__(self, message="Strategy is undefined at the reached state."):
        super().__init__(message)


class StrategyMismatchError(SynthesisError):
    """Exception raised when a strategy artifact does not match the instance."""

    def __init__(self, message="Strategy does not match the instance."):
        super().__init__(message)


class InfeasibleError(SynthesisError):
    """Exception raised when no winning strategy exists within the budget."""

    exit_code = 2

    def __init__(self, message="Task is infeasible."):
        super().__init__(message)


class CrossSolverMismatch(SynthesisError):
    """Exception raised when two solvers disagree on the same instance."""

    exit_code = 4

    def __init__(self, message="Solvers disagree on the value at the initial state."):
        super().__init__(message)
