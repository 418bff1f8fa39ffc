"""Exception hierarchy shared by the library and the command line front-end.

Each error carries the process exit code the CLI maps it to.
"""


class FuzzyVPRSError(Exception):
    exit_code = 3


class ConfigError(FuzzyVPRSError):
    """Invalid run configuration or membership-function set."""

    exit_code = 1


class InvalidBeta(ConfigError, ValueError):
    pass


class ParseError(FuzzyVPRSError):
    exit_code = 2

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class SchemaError(ParseError):
    pass


class MissingClassLabel(ParseError):
    pass


class AllZeroMembership(FuzzyVPRSError):
    """A value falls outside the support of every region of its attribute."""

    def __init__(self, attribute, value, object_id=None):
        self.attribute = attribute
        self.value = value
        self.object_id = object_id
        msg = f"value {value!r} of attribute {attribute!r} has zero membership in every region"
        if object_id is not None:
            msg = f"object {object_id}: {msg}"
        super().__init__(msg)


class NoCertainDonor(FuzzyVPRSError):
    pass


class EmptyClass(FuzzyVPRSError):
    pass


class NoMatch(FuzzyVPRSError):
    pass


class UnresolvedUncertainty(FuzzyVPRSError):
    exit_code = 4

    def __init__(self, unresolved):
        self.unresolved = dict(unresolved)
        parts = [f"{oid}:{'/'.join(attrs)}" for oid, attrs in sorted(self.unresolved.items())]
        super().__init__("values still unknown after imputation: " + ", ".join(parts))
