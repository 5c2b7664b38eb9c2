"""Exception types shared across the package."""


class GridStabError(Exception):
    """Base class for all package errors."""


# --- dataset ingestion ---

class MissingFile(GridStabError):
    pass


class HeaderMismatch(GridStabError):
    def __init__(self, expected, found):
        self.expected = list(expected)
        self.found = list(found)
        super().__init__(f"expected columns {self.expected}, found {self.found}")


class RowParseError(GridStabError):
    def __init__(self, row, column, detail=""):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: {detail}")


class InvariantViolation(GridStabError):
    def __init__(self, violations):
        # violations: list of (row, rule) pairs
        self.violations = list(violations)
        head = "; ".join(f"row {r}: {rule}" for r, rule in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"{len(self.violations)} invariant violation(s): {head}{more}")


class UnknownLabel(GridStabError):
    def __init__(self, value, row):
        self.value = value
        self.row = row
        super().__init__(f"unknown label {value!r} at row {row}")


class BadFraction(GridStabError):
    pass


class TooFewSamples(GridStabError):
    pass


# --- spatial load model ---

class BadRange(GridStabError):
    pass


class BadResolution(GridStabError):
    pass


# --- attack model ---

class UnknownCustomerInSet(GridStabError):
    def __init__(self, customer_id):
        self.customer_id = customer_id
        super().__init__(f"compromised set references unknown customer {customer_id!r}")


# --- feature statistics ---

class EmptyDataset(GridStabError):
    pass


class LengthMismatch(GridStabError):
    pass


class ZeroVariance(GridStabError):
    pass


class DegenerateInput(GridStabError):
    pass


class EmptyInput(GridStabError):
    pass


class BadBinCount(GridStabError):
    pass


# --- models ---

class EmptyNode(GridStabError):
    pass


class EmptyTrainingSet(GridStabError):
    pass


class BadParams(GridStabError):
    pass


class NonFiniteData(GridStabError):
    pass


class NoConvergence(GridStabError):
    def __init__(self, grad_norm, iterations):
        self.grad_norm = grad_norm
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations (gradient norm {grad_norm:.3e})"
        )


class NonFiniteLoss(GridStabError):
    pass


class SchemaMismatch(GridStabError):
    pass


class EmptyTestSet(GridStabError):
    pass


# --- pipeline ---

class TooManyPartitions(GridStabError):
    pass


class BadSizes(GridStabError):
    pass


class PipelineStageError(GridStabError):
    """Wraps a component error with the pipeline stage and partition index."""

    def __init__(self, stage, partition, cause):
        self.stage = stage
        self.partition = partition
        self.cause = cause
        where = f"stage {stage!r}" + ("" if partition is None else f", partition {partition}")
        super().__init__(f"{where}: {cause}")


# --- simulation ---

class BadSettings(GridStabError):
    pass
