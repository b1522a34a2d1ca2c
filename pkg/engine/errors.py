"""
Exception hierarchy for the AdS kernel.

Every failure raised by the engine derives from AdsError, so the CLI can tell
geometric failures apart from programming errors and map them to exit codes.
"""

from typing import Optional


class AdsError(Exception):
    """Base class for kernel errors, optionally carrying the offending residual."""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


# core_models
class NotOnQuadric(AdsError):
    pass


class DegeneratePlane(AdsError):
    pass


class NotTangent(AdsError):
    pass


class OutOfChart(AdsError):
    pass


# geodesics_duality
class DegenerateGeodesic(AdsError):
    pass


class NotSpacelike(AdsError):
    pass


# boundary
class NotRankOne(AdsError):
    pass


class NotMonotone(AdsError):
    pass


# domains
class Inconclusive(AdsError):
    pass


class DegenerateHull(AdsError):
    pass


# surfaces_gauss
class DomainBoundary(AdsError):
    pass


class NotTimelike(AdsError):
    pass


class NotFuture(AdsError):
    pass


class NonPositiveK(AdsError):
    pass


# mgh_holonomy
class OutOfRange(AdsError):
    pass


class DegenerateLattice(AdsError):
    pass


class RelatorViolation(AdsError):
    pass


class NonHyperbolicWord(AdsError):
    pass


class NonMonotoneSamples(AdsError):
    pass


# earthquake_lab
class NonPositiveWeight(AdsError):
    pass


class OnBendingLine(AdsError):
    pass


class OnLeaf(AdsError):
    pass


class SingularJacobian(AdsError):
    pass


# command line
class UnknownFigure(AdsError):
    pass


class UnknownSuite(AdsError):
    pass


class ConfigError(AdsError):
    pass
