"""Exception hierarchy shared across the package."""


class SummitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(SummitError):
    """Two clusters (or a cluster and a dataset) disagree on attribute count."""


class ParameterError(SummitError):
    """A user-supplied parameter is out of its valid range."""


class EmptyCoverageError(SummitError):
    """An average was requested over an empty row set."""


class CapacityError(SummitError):
    """A requested computation exceeds a configured size limit."""


class IngestError(SummitError):
    """Input data could not be turned into a dataset."""


class SourceConnectionError(IngestError):
    """A row source (database, file) could not be reached."""


class MergeError(SummitError):
    """An invalid merge was requested (e.g. a cluster with itself)."""


class StoreFormatError(SummitError):
    """A store file is corrupt or structurally invalid."""


class StoreVersionError(StoreFormatError):
    """A store file was written by an incompatible format version."""


class DatasetMismatchError(SummitError):
    """A store was built over a different dataset than the one supplied."""


class BuildBudgetExceeded(SummitError):
    """An on-demand store build ran past its time budget."""
