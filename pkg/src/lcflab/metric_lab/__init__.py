"""Coordinate-chart metrics, their curvature, geodesics and constancy scans."""

from .fields import (
    Conformal,
    Flat,
    GuardError,
    MetricField,
    MetricSpecError,
    Perturbation,
    Product,
    SpaceForm,
    field_from_spec,
    form_times_line,
    load_field,
    metric_at,
    sphere_times_hyperbolic,
    sphere_times_sphere,
)
from .geometry import (
    CoordinateFrame,
    FrameError,
    FrameReport,
    christoffel,
    codazzi_residual,
    connection_coefficients,
    frame_connection_check,
    metric_jets,
    nabla_ricci,
    ricci_at,
    ricci_jet,
    ricci_spectrum,
    riemann_at,
    weyl_norm_at,
)
from .scans import (
    GeodesicPath,
    GeodesicState,
    ScanReport,
    StepSizeError,
    cspace_scan,
    integrate_geodesic,
    jacobi_spectrum_at,
    random_points,
    random_unit_states,
    ricci_constancy_scan,
)

