"""Exception hierarchy shared by the solver, oracle and finite-volume code."""


class CharburgError(Exception):
    """Base class for every mathematical-domain failure raised by the package."""


class OutOfValidity(CharburgError):
    """The flow map or its primitive was evaluated at or past finite-time blow-up."""


class MultivaluedSolution(CharburgError):
    """Characteristics have crossed, so the classical solution is not single-valued."""


class BracketNotFound(CharburgError):
    """No sign change of the characteristic residual was found in the searched region."""


class NoConvergence(CharburgError):
    """Bisection stopped at ``max_iter`` with the residual above tolerance."""


class BlowUpDetected(CharburgError):
    """The RK4 oracle state exceeded the blow-up threshold mid-integration."""


class CflViolation(CharburgError):
    """A finite-volume step would exceed the admissible Courant number."""

