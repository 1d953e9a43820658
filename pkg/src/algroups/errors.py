"""Exception hierarchy.

Errors that signal a bad input or an impossible request derive from
:class:`AlgroupsError`.  Errors that would falsify one of the verified
theorems derive from :class:`TheoremViolation`; batch drivers catch those
and turn them into report records instead of aborting.
"""


class AlgroupsError(Exception):
    pass


# -- fields ----------------------------------------------------------------

class NotPrime(AlgroupsError, ValueError):
    pass


class ReducibleModulus(AlgroupsError, ValueError):
    pass


class DegreeMismatch(AlgroupsError, ValueError):
    pass


class DivisionByZero(AlgroupsError, ZeroDivisionError):
    pass


class FieldMismatch(AlgroupsError, ValueError):
    pass


class NotASubfield(AlgroupsError, ValueError):
    pass


class NoEmbedding(AlgroupsError, ValueError):
    pass


# -- algebras and groups ---------------------------------------------------

class NotAssociative(AlgroupsError, ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotNilpotent(AlgroupsError, ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class BadParameter(AlgroupsError, ValueError):
    pass


class NotDefinedOverSubfield(AlgroupsError, ValueError):
    pass


class TooLarge(AlgroupsError):
    pass


class NotSubgroup(AlgroupsError, ValueError):
    pass


class NotNormal(AlgroupsError, ValueError):
    pass


class NotInvertible(AlgroupsError, ValueError):
    pass


# -- cyclotomic / class functions -----------------------------------------

class LevelMismatch(AlgroupsError, ValueError):
    pass


class LevelTooSmall(AlgroupsError, ValueError):
    pass


class GroupMismatch(AlgroupsError, ValueError):
    pass


class NotAnInteger(AlgroupsError, ArithmeticError):
    pass


class NotIrreducible(AlgroupsError, ValueError):
    pass


class NotInvariant(AlgroupsError, ValueError):
    pass


class SumOfSquaresMismatch(AlgroupsError):
    """Fatal: the enumerated irreducibles do not account for the group."""


# -- theorem violations ----------------------------------------------------

class TheoremViolation(AlgroupsError):
    """A computed object contradicts a statement the library verifies."""

    check = "theorem"

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class StabilizerNotAlgebraSubgroup(TheoremViolation):
    check = "stabilizer-algebra-subgroup"


class RadicalNotSubspace(TheoremViolation):
    check = "radical-subspace"


class IsotropicExtensionFailed(TheoremViolation):
    check = "isotropic-extension"


class NoExtension(TheoremViolation):
    check = "extension-exists"


class InvariantNotLinear(TheoremViolation):
    check = "halasi"


class NotAHomomorphism(TheoremViolation):
    check = "norm-homomorphism"


class NotConstantOnCosets(TheoremViolation):
    check = "norm-well-defined"


class RadicalMismatch(TheoremViolation):
    check = "radical-base-change"


class NotIrreducibleAfterBaseChange(TheoremViolation):
    check = "base-change-irreducible"


class NotGaloisInvariant(TheoremViolation):
    check = "base-change-galois"


class ReductionMismatch(TheoremViolation):
    check = "reduction-compatibility"


# -- catalog ---------------------------------------------------------------

class ParseError(AlgroupsError, ValueError):
    def __init__(self, msg, path=None, line=None, field=None):
        loc = ", ".join(f"{k} {v}" for k, v in (("file", path), ("line", line), ("field", field)) if v is not None)
        super().__init__(f"{msg} ({loc})" if loc else msg)
        self.path, self.line, self.field = path, line, field


class ValidationError(AlgroupsError, ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness
