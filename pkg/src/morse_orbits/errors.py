"""Exception hierarchy shared by all modules."""


class MorseOrbitsError(Exception):
    """Base class for every error raised by this package."""


# surface -------------------------------------------------------------------

class SurfaceError(MorseOrbitsError):
    """The triangle list does not describe a compact connected surface."""


class EmptyMesh(SurfaceError):
    pass


class DegenerateTriangle(SurfaceError):
    pass


class DuplicateTriangle(SurfaceError):
    pass


class IsolatedVertex(SurfaceError):
    pass


class NonManifoldEdge(SurfaceError):
    pass


class BadLink(SurfaceError):
    pass


class Disconnected(SurfaceError):
    pass


# scalar fields / PL Morse --------------------------------------------------

class MorseError(MorseOrbitsError):
    """The scalar field is not an admissible PL Morse map."""


class CountMismatch(MorseError):
    pass


class CircleSpreadViolation(MorseError):
    pass


class NonLevelBoundary(MorseError):
    pass


class BoundaryCritical(MorseError):
    pass


class BoundaryVertexQueried(MorseError):
    pass


class DegenerateSaddle(MorseError):
    pass


class DegenerateLevel(MorseError):
    """A triangle is flat, or an extremum shares its level component."""


class MorseEqualityViolated(MorseError):
    pass


# reeb / orbit engine -------------------------------------------------------

class UnclassifiableNoSaddle(MorseOrbitsError):
    pass


class NotSimple(MorseOrbitsError):
    pass


class RequiresSaddle(MorseOrbitsError):
    pass


# homology ------------------------------------------------------------------

class HomologyError(MorseOrbitsError):
    pass


class NotInternal(HomologyError):
    pass


class DimensionMismatch(HomologyError):
    pass


class NonOrientableUnsupported(HomologyError):
    pass


# input parsing -------------------------------------------------------------

class ParseError(MorseOrbitsError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NonNumeric(ParseError):
    pass
