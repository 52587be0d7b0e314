"""Exception hierarchy shared across the package."""


class QhError(Exception):
    """Base class for all package-specific errors."""


class NonInvertible(QhError):
    """Division by an element without an inverse (zero constant term etc.)."""


class BoxMismatch(QhError):
    """Partition does not fit the prescribed bounding box."""


class TooLarge(QhError):
    """Enumeration guard exceeded (tableau sums on big shapes)."""


class SingularVandermonde(QhError):
    """Two evaluation arguments coincide in a determinant ratio."""


class DegenerateVanishingPoints(QhError):
    """Evaluation points for the basis-expansion solve collide."""


class DegenerateNodes(QhError):
    """Interpolation nodes for coefficient extraction collide."""


class NonTerminating(QhError):
    """Rewrite depth limit hit; signals a bug, not a user error."""


class SectorOverflow(QhError):
    """Particle-number changing operator applied to an extremal sector."""


class QNotInvertible(QhError):
    """Affine operation requested with a non-invertible quantum parameter."""


class GenericityViolation(QhError):
    """Equivariant parameters violate the genericity assumptions."""


class NonConvergence(QhError):
    """Iterative solver failed to converge."""


class EngineUnavailable(QhError):
    """Requested product engine cannot run in the current mode."""


class InconsistentEngines(QhError):
    """Two product engines disagree; never swallowed."""


class SubstitutionViolatesGenericity(QhError):
    """A specialization map would break the mode invariants."""
