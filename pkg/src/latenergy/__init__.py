"""Exact additive-combinatorics toolkit for lattice points on spheres and
truncated paraboloids in 3 and 4 dimensions: representation functions,
additive energies, slices and incidences, greedy slice-peeling decomposition,
and a scan harness that reports exponent trends at desk scale.
"""

__version__ = "0.1.0"

from .backend import active_backend
from .decompose import (
    Decomposition,
    ceil_pow,
    floor_pow,
    orthant_pipeline,
    peel_cap,
    peel_threshold,
    verify_decomposition,
    xy_decompose,
)
from .energy import (
    EnergyValue,
    LevelSetProfile,
    RepFn,
    energy,
    energy_brute,
    level_sets,
    moment_via_dft,
    rep_fn,
    sumset,
    sup_rep,
)
from .errors import BudgetExceeded
from .geometry import (
    Hyperplane,
    IncidenceReport,
    KstReport,
    SphereTranslate,
    bisector_hyperplane,
    dualize,
    incidences,
    intersect_translates,
    kst_witness,
    paraboloid_translate_intersection,
    slice_set,
)
from .harness import (
    ExponentFit,
    ScanConfig,
    check_inequalities,
    fit_exponent,
    random_subset,
    run_scan,
)
from .lattice import (
    OrthantPattern,
    PointSet,
    all_orthant_patterns,
    enumerate_paraboloid,
    enumerate_sphere,
    legendre_admissible,
    pointset,
    positive_orthant,
    read_pointset,
    restrict_to_orthant,
    write_pointset,
)
