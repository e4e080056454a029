"""Exception taxonomy.

Construction failures are raised eagerly by :func:`betalab.field.make_base`
so that every downstream routine may assume a validated base.  Budget
exhaustion is always a distinct, catchable condition and is never silently
converted into a wrong answer.
"""

from __future__ import annotations


class BetalabError(Exception):
    """Common ancestor for every error raised by this package."""


class BaseConstructionError(BetalabError, ValueError):
    """A base could not be validated."""


class NotMonicError(BaseConstructionError):
    """The defining polynomial is not monic with integer coefficients."""


class ReducibleError(BaseConstructionError):
    """The defining polynomial has a rational root or a repeated factor."""


class NoDominantRootError(BaseConstructionError):
    """The polynomial does not have exactly one real root greater than 1."""


class NotPisotError(BaseConstructionError):
    """Some conjugate of the dominant root has modulus >= 1."""


class AlphabetError(BaseConstructionError):
    """The digit alphabet size d does not satisfy beta < d (with d >= 2)."""


class MixedBasesError(BetalabError, ValueError):
    """Operands created under different bases were combined."""


class DigitOutOfRangeError(BetalabError, ValueError):
    """A digit word contains a symbol outside the declared alphabet."""


class NotInUnitIntervalError(BetalabError, ValueError):
    """An expansion was requested for a value outside [0, 1)."""


class StateBudgetError(BetalabError, RuntimeError):
    """A greedy orbit exceeded its state budget before closing up."""


class BudgetExceededError(BetalabError, RuntimeError):
    """A block scan ran out of digits or steps before finding a cut."""


class SearchExhaustedError(BetalabError, RuntimeError):
    """A bounded search finished without a witness (inconclusive, not a no)."""


class PeriodNotInAttractorError(BetalabError, RuntimeError):
    """A normalization tail fell outside the enumerated attractor.

    This signals a bug in attractor enumeration or normalization and should
    never be swallowed.
    """


class WindowTooShortError(BetalabError, ValueError):
    """A two-sided window closed no complete block left of position 1."""


class NoStraddlingBlockError(BetalabError, ValueError):
    """No block (even after merging) covers both sides of position 0."""


class NotUnitError(BetalabError, ValueError):
    """The torus cross-check needs a unit Pisot base (|constant term| = 1)."""


class HomoclinicDecayTooSlowError(BetalabError, RuntimeError):
    """Torus sums cannot reach the requested tolerance by truncation."""


class TruncationTooCoarseError(BetalabError, ValueError):
    """A sampling truncation depth is too shallow for the requested bins."""


class WrongAlphabetError(BetalabError, ValueError):
    """An operation defined only for the binary alphabet got d != 2."""


class OrbitNotFiniteError(BetalabError, RuntimeError):
    """The expansion orbit of 1 did not close within the step budget."""


class ConfigError(BetalabError, ValueError):
    """A run configuration file failed schema validation."""
