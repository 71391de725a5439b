"""Per-point status codes returned by both kernel backends."""
from .errors import (BlowUpDetected, BracketNotFound, MultivaluedSolution,
                     NoConvergence, OutOfValidity)

OK = 0
OUT_OF_VALIDITY = 1
MULTIVALUED = 2
BRACKET_NOT_FOUND = 3
NO_CONVERGENCE = 4
BLOW_UP = 5

# number of geometric doublings of the scan window before giving up
MAX_EXPANSIONS = 8
# |q| above this aborts an RK4 oracle run
BLOW_UP_THRESHOLD = 1e12

EXCEPTIONS = {
    OUT_OF_VALIDITY: (OutOfValidity, "flow map blows up before the requested time"),
    MULTIVALUED: (MultivaluedSolution, "characteristics have crossed; more than one foot point"),
    BRACKET_NOT_FOUND: (BracketNotFound, "no sign change of the characteristic residual"),
    NO_CONVERGENCE: (NoConvergence, "bisection did not reach the residual tolerance"),
    BLOW_UP: (BlowUpDetected, "oracle state exceeded the blow-up threshold"),
}


def raise_for(code: int, x=None):
    exc, msg = EXCEPTIONS[code]
    if x is not None:
        msg = f"{msg} (at x={x!r})"
    err = exc(msg)
    err.x = x
    raise err
