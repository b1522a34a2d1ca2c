"""AdS kernel engine - numerical geometry of anti-de Sitter three-space."""

from .errors import AdsError
from .config_loader import ConfigLoader, RunConfig
from .core_models import Isometry, MatPoint, QuadricPoint, TangentVector, UnivCoverPoint
from .hyperbolic import OrientedGeodesic
from .circle_maps import CircleMap
from .boundary import AchronalMeridian, BoundaryPoint, CausalRelation, NoLimit
from .geodesics_duality import Geodesic, GeodesicKind, Plane
from .domains import DomainReport, HullOracle
from .surfaces_gauss import FormsAtPoint, GaussImage, SurfacePatch
from .mgh_holonomy import FuchsianPair, Genus1Report, LimitCurve, TetraChart, TorusHolonomy
from .earthquake_lab import FiniteLamination, PleatedSurface
from .display import Display
from .verification import CheckResult, run_suite

__all__ = [
    'AdsError',
    'ConfigLoader',
    'RunConfig',
    'Isometry',
    'MatPoint',
    'QuadricPoint',
    'TangentVector',
    'UnivCoverPoint',
    'OrientedGeodesic',
    'CircleMap',
    'AchronalMeridian',
    'BoundaryPoint',
    'CausalRelation',
    'NoLimit',
    'Geodesic',
    'GeodesicKind',
    'Plane',
    'DomainReport',
    'HullOracle',
    'FormsAtPoint',
    'GaussImage',
    'SurfacePatch',
    'FuchsianPair',
    'Genus1Report',
    'LimitCurve',
    'TetraChart',
    'TorusHolonomy',
    'FiniteLamination',
    'PleatedSurface',
    'Display',
    'CheckResult',
    'run_suite',
]
