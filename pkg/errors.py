"""
Exception hierarchy for omlq.

Input defects derive from ValidationError (also a ValueError, so callers that
only know about ValueError keep working). Resource guards derive from
ComputationLimit. The CLI maps both to exit code 2.
"""


class OmlqError(Exception):
    """Base class for all omlq errors."""


class ValidationError(OmlqError, ValueError):
    """Malformed or inconsistent input."""


class NotALattice(ValidationError):
    """Some pair lacks a unique glb or lub, or the order has a cycle."""


class BadOrthocomplement(ValidationError):
    """The orthocomplement is not total, involutive, antitone or complementing."""


class NotOrthomodular(ValidationError):
    """A valid ortholattice was required to be orthomodular and is not."""


class UnknownBuiltin(ValidationError):
    pass


class CrossLattice(ValidationError):
    """Operands belong to different lattices (or an element id is out of range)."""


class AlphabetMismatch(ValidationError):
    pass


class MalformedPath(ValidationError):
    pass


class DocumentError(ValidationError):
    """A JSON document does not follow its schema."""


class UnknownSuite(ValidationError):
    pass


class NotDeterministic(ValidationError):
    pass


class NotFiniteSupport(ValidationError):
    pass


class NotFiniteRange(ValidationError):
    pass


class UnexpectedEpsilon(ValidationError):
    """An epsilon-free automaton was required."""


class ComputationLimit(OmlqError):
    """A configured resource cap was exceeded."""


class CommutatorSetTooLarge(ComputationLimit):
    pass


class StateBlowup(ComputationLimit):
    pass


class ErasingImageUnbounded(ComputationLimit):
    pass


class WordTooLongForPump(ComputationLimit):
    pass
