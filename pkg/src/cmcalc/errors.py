"""Exception types shared across the package."""


class CMError(Exception):
    """Base class for all errors raised by cmcalc."""


class NotAGroup(CMError):
    """The given Cayley table does not define a group."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotASubgroup(CMError):
    """The given element set is not a subgroup of the stated parent."""


class NotACMType(CMError):
    """The given coset subset fails the half-system condition."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAnAutomorphismOfK(CMError):
    """Right translation requested by an element outside the normalizer."""


class NotNested(CMError):
    """Operation on a pair of fields that are not nested in the context."""


class NotGaloisContext(CMError):
    """Operation requires a field whose fixing subgroup is normal."""


class InternalInconsistency(CMError):
    """An invariant that should hold by construction failed; this is a bug."""


class NoSolution(CMError):
    """The defining linear system has no solution (precondition violated)."""


class NotSerrePair(CMError):
    """A (lattice, cocharacter) pair violates one of the two pair axioms."""

    def __init__(self, message, axiom):
        super().__init__(message)
        self.axiom = axiom


class NotDefinedOverE(CMError):
    """The cocharacter is not fixed by the subgroup cutting out E."""


class FactorNotInH(CMError):
    """A cocycle factor fell outside the fixing subgroup (corrupt w-system)."""


class NotPrime(CMError):
    """Argument expected to be a rational prime."""


class NoPrimaryGenerator(CMError):
    """No (or no unique) generator congruent to 1 modulo the convention."""


class NotCoprime(CMError):
    """Ideal is not coprime to the relevant modulus."""


class BadPrime(CMError):
    """Prime of bad reduction (or p = 2) passed to a good-reduction routine."""


class RamifiedOrBadPrime(CMError):
    """Local factor intentionally not produced at this prime."""
