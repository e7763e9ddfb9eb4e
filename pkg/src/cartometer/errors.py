"""Exception hierarchy shared by every cartometer module.

Each error carries a stable machine code so the CLI and the REST service
can map failures to exit codes / HTTP statuses without string matching.
"""


class CartometerError(Exception):
    machine_code = "internal-error"


class InvalidInputError(CartometerError):
    machine_code = "invalid-input"


class InsufficientDataError(CartometerError):
    machine_code = "insufficient-data"


class DegenerateConfigurationError(CartometerError):
    machine_code = "degenerate-configuration"


class NonInvertibleError(CartometerError):
    machine_code = "non-invertible"


class ProjectionDomainError(CartometerError):
    machine_code = "projection-domain"


class DuplicatePointError(CartometerError):
    machine_code = "duplicate-point"


class NotFoundError(CartometerError):
    machine_code = "not-found"


class UncalibratedSessionError(CartometerError):
    machine_code = "uncalibrated-session"


class IncompleteFeatureError(CartometerError):
    machine_code = "incomplete-feature"


class SchemaViolationError(CartometerError):
    machine_code = "schema-violation"


class SchemaVersionError(SchemaViolationError):
    machine_code = "schema-version"
