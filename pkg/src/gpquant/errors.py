"""Exception hierarchy.  Violations carry the witness that refutes the claim."""


class GPQuantError(Exception):
    """Base class for all package errors."""


class DegreeMismatch(GPQuantError, TypeError):
    """Operands of incompatible degree or kind."""


class StructureError(GPQuantError):
    """A generator frame fails one of the big-isotropic invariants."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IsotropyViolation(StructureError):
    pass


class OrthogonalityViolation(StructureError):
    pass


class RankDeficiency(StructureError):
    pass


class AnnihilatorMismatch(StructureError):
    pass


class NotPoisson(GPQuantError):
    pass


class NotInBundle(GPQuantError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class Unsolvable(GPQuantError):
    pass


class Indeterminate(GPQuantError):
    """Generic solution exists but has denominators vanishing on ``locus``."""

    def __init__(self, message, locus=None):
        super().__init__(message)
        self.locus = locus


class IndeterminateExpansion(Indeterminate):
    """Re-expanding a section in a structure frame hit a denominator locus."""


class NotClosed(GPQuantError):
    pass


class NotOnLeaf(GPQuantError):
    pass
