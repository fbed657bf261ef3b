"""quakelab: finite earthquakes of the hyperbolic plane and their experiments."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ClassificationError,
    ConvergenceError,
    GeometryError,
    InconsistencyError,
    InvalidBoxError,
    LaminationError,
    NormalizationError,
    NumericalBreakdownError,
    NumericalError,
    ValidationError,
)
from .hyperbolic import (  # noqa: E402
    BoundaryPoint,
    DPoint,
    Geodesic,
    GeodesicArc,
    GeodesicBox,
    HPoint,
    IsometryType,
    MoebiusMap,
    axis,
    cross_ratio,
    hyp_distance,
    liouville_measure,
    moebius_from_box,
    translation_length,
)
from .lamination import (  # noqa: E402
    EMPTY,
    FiniteMeasuredLamination,
    circle_length,
    circle_mass_bound,
    depth_profile,
    end_profile,
    exhaustion_profile,
    geodesic_distance,
    read_lamination,
    sampled_norm,
    scale,
    thurston_norm,
    transverse_measure,
    write_lamination,
)
from .earthquake import (  # noqa: E402
    EarthquakeMap,
    build_earthquake,
    eval_boundary,
    eval_interior,
    invert_boundary,
    recover_measure,
    strata,
    verify_left,
)
from .barycentric import (  # noqa: E402
    BeltramiSample,
    CircleMap,
    EarthquakeCircleMap,
    MoebiusCircleMap,
    beltrami,
    de_extend,
    default_grid,
    distance_proxy,
)
