"""Exception types shared across the library.

Construction and validation errors carry enough context to name the offending
object (dart, vertex, edge) so CLI reports can surface them verbatim.
"""


class NewtonGraphError(Exception):
    """Base class for all library errors."""


class MalformedRotation(NewtonGraphError):
    """Rotation data is not a partition of the darts, or twins are bad."""


class NotSphere(NewtonGraphError):
    """Rotation system has positive genus on some connected component."""


class UnknownEdge(NewtonGraphError):
    """An edge id was referenced that the map does not contain."""


class Disconnected(NewtonGraphError):
    """Operation requires a connected map."""


class InvalidGraphMap(NewtonGraphError):
    """Dart paths or vertex images violate graph-map continuity."""


class IncoherentLocalMap(NewtonGraphError):
    """Total winding at a vertex is not an integer multiple of the full turn.

    Signals that no branched-cover-compatible extension exists at the vertex.
    """

    def __init__(self, vertex, message=""):
        self.vertex = vertex
        super().__init__(message or f"incoherent winding at vertex {vertex!r}")


class Unresolved(NewtonGraphError):
    """An orbit computation hit its iteration cap without resolving."""

    def __init__(self, message="", partial=None):
        self.partial = partial
        super().__init__(message or "orbit unresolved within iteration cap")


class NoConvergence(NewtonGraphError):
    """Eigenvalue iteration hit its cap; carries the last exact bracket."""

    def __init__(self, lower, upper, iterations):
        self.lower = lower
        self.upper = upper
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations; "
            f"bracket [{lower}, {upper}]"
        )


class NotValidated(NewtonGraphError):
    """An equivalence query was made on inputs that failed validation."""


class DocumentSyntaxError(NewtonGraphError):
    """Document text is not well-formed; carries position when known."""

    def __init__(self, message, line=None, column=None, key=None):
        self.line = line
        self.column = column
        self.key = key
        pos = ""
        if line is not None:
            pos = f" at line {line}" + (f", column {column}" if column is not None else "")
        if key is not None:
            pos += f" (key: {key})"
        super().__init__(message + pos)


class DanglingReference(NewtonGraphError):
    """A document referenced an id that was never declared."""

    def __init__(self, kind, ref, where=""):
        self.kind = kind
        self.ref = ref
        suffix = f" in {where}" if where else ""
        super().__init__(f"undeclared {kind} id {ref!r}{suffix}")


class VersionMismatch(NewtonGraphError):
    """Document declares a format version this library does not speak."""

    def __init__(self, found, expected):
        self.found = found
        self.expected = expected
        super().__init__(f"unsupported format {found!r} (expected {expected!r})")
