"""Exception hierarchy shared by the divergence, polynomial and solver modules."""


class RdpfError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RdpfError, ValueError):
    """An input lies outside the domain where a quantity is finite or defined."""


class RangeError(RdpfError, ValueError):
    """A perception budget exceeds the largest attainable divergence."""


class DegenerateError(RdpfError):
    """The perception polynomial collapses (C = 0) and has no interior stationary point."""


class TangentError(RdpfError):
    """The polynomial touches zero at its stationary point (double root)."""


class NoSignChange(RdpfError):
    """A bracket could not be verified to contain a sign change."""


class SpuriousRoot(RdpfError):
    """An algebraic root failed divergence back-substitution."""


class Infeasible(RdpfError):
    """No jointly Gaussian reconstruction meets both budgets."""


class NonConvergent(RdpfError):
    """A numerical oracle exhausted its budget before reaching tolerance."""
