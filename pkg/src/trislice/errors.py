"""Exception hierarchy.

Everything raised on purpose by this package derives from ``TrisliceError``.
The CLI maps these to exit status 1; argparse usage errors exit with 2.
"""

from __future__ import annotations


class TrisliceError(Exception):
    """Base class for domain errors."""


class ParameterError(TrisliceError, ValueError):
    """An argument is outside the operation's domain (nonprime modulus, l > m, ...)."""


class WidthError(ParameterError):
    """An element index does not fit the declared ground size."""


class ContextError(ParameterError):
    """Operands were declared over different ground sets."""


class PreconditionError(TrisliceError):
    """A lemma's hypotheses do not hold for the supplied profile or family."""


class HypothesisError(TrisliceError):
    """A family violates the hypotheses of the theorem whose tensor is being built."""


class OrderError(TrisliceError):
    """A family is not sorted by the order the construction requires."""


class DuplicationError(TrisliceError):
    """An operation would put the same subset into a family twice."""


class VerificationError(TrisliceError):
    """A family or ledger record failed re-verification."""


class InvariantError(TrisliceError, AssertionError):
    """Something a lemma guarantees did not happen. Always a bug or a bad input that slipped past checks."""
