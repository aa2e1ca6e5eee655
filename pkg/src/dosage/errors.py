"""Exception types shared across the package."""


class CapExceeded(RuntimeError):
    """Exhaustive enumeration was requested on a graph above the size cap.

    Carries a message naming the cap and the override flag; the CLI maps this
    to its own exit code so scripts can retry with --force.
    """


class UncoveredVertexError(ValueError):
    """An operation that needs every vertex inside a hyperedge met one that is not."""
