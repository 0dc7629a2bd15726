"""Exception types shared across the package."""


class PredcraftError(Exception):
    """Base class for all package errors."""


# --- dataset loading / validation ---

class SchemaError(PredcraftError):
    pass


class DuplicateKey(SchemaError):
    def __init__(self, table: str, value):
        self.table = table
        self.value = value
        super().__init__(f"duplicate primary key {value!r} in table {table!r}")


class BrokenRelation(SchemaError):
    def __init__(self, child: str, child_key: str, value):
        self.child = child
        self.child_key = child_key
        self.value = value
        super().__init__(
            f"dangling foreign key {value!r} in {child}.{child_key}"
        )


class UnknownInstance(PredcraftError):
    pass


class SampleTooLarge(PredcraftError):
    pass


# --- labeling / featurization ---

class FieldError(PredcraftError):
    pass


class PathError(PredcraftError):
    pass


# --- modeling ---

class ShapeError(PredcraftError):
    pass


class DegenerateLabels(PredcraftError):
    pass


class EmptyGrid(PredcraftError):
    pass


class NotAvailable(PredcraftError):
    pass


# --- problem space ---

class CompileError(PredcraftError):
    pass


# --- judging ---

class Exhausted(PredcraftError):
    pass


class InvalidExplanation(PredcraftError):
    pass


class Conflict(PredcraftError):
    pass


class InvalidGame(PredcraftError):
    pass


# --- service ---

class StateViolation(PredcraftError):
    pass


class ClockError(PredcraftError):
    pass


class NotPrecomputed(PredcraftError):
    pass


class Forbidden(PredcraftError):
    pass
