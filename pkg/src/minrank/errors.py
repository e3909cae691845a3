"""Error types shared across solver components."""

from __future__ import annotations


class ContractViolationError(RuntimeError):
    """An internal invariant that genuine instances can never break failed.

    Raised when the oracle feeds back values no matroid pair could produce
    (an unsatisfiable arc-constraint system, a broken promise, an
    impossible certificate). Maps to exit code 3 at the command line.
    """


class NegativeCycleError(ContractViolationError):
    """A negative-total-cost cycle appeared where optimality forbids one."""
