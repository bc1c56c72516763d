"""Exception hierarchy shared across the library."""


class LatticePropError(Exception):
    """Base class for all library errors."""


class SpacelikeInput(LatticePropError):
    """Minkowski length requested for a spacelike separation."""


class OutsideCone(LatticePropError):
    """Point lies outside the forward polygonal cone."""


class DegenerateNeighborhood(LatticePropError):
    """Could not assemble d linearly independent neighbor directions."""


class NotGenerated(LatticePropError):
    """Path segment direction is not a multiple of any axis vector."""


class SpacelikeSegment(LatticePropError):
    """Path contains a spacelike segment."""


class BudgetExceeded(LatticePropError):
    """Enumeration exceeded its configured node budget."""


class InfeasibleWord(LatticePropError):
    """Target vector lies outside the cone of the word's directions."""


class TruncationNotReached(LatticePropError):
    """Series hit the word-length cap before the tail tolerance."""


class QuadratureFailure(LatticePropError):
    """Numerical integration failed to converge."""


class NearLightcone(LatticePropError):
    """Evaluation point too close to the light cone."""


class NullOrSpacelike(LatticePropError):
    """Rapidity requested for a null or spacelike vector."""


class NullStep(LatticePropError):
    """Fermionic weight requested for a path with a null step."""


class DimensionMismatch(LatticePropError):
    """Operands live in different dimensions."""


class DegreeMismatch(LatticePropError):
    """Diagram vertex degree does not match its edge incidence."""


class EmptyOrbit(LatticePropError):
    """Orbit sum over an empty in-cone lift set."""


class BoundaryPoint(LatticePropError):
    """Disk-model point lies on the unit circle."""
