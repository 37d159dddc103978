"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, numerical
ill-posedness (clustered spectra, duplicate points, failed factorizations)
exits 2.
"""


class UsageError(Exception):
    """Bad command line, unreadable input file, or malformed file content."""


class NumericalError(Exception):
    """A computation failed or its result would be numerically meaningless."""


class IllPosedError(NumericalError):
    """The requested quantity is not well defined for this input."""


class ClusteredSpectrumError(IllPosedError):
    """Eigenvalues too close for eigenvector-level quantities to make sense."""

    def __init__(self, message: str, cluster=()):
        super().__init__(message)
        self.cluster = tuple(cluster)


class DuplicatePointsError(IllPosedError):
    """A configuration contains coincident points."""
