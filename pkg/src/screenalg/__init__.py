"""Numerical verification engine for the elliptic algebra of modified
screening currents of the two-parameter deformed W-algebra.

The package builds the level-1 free-field realization over a simply-laced
Cartan matrix and machine-checks every defining relation of the algebra
through two independent routes: fully summed q-product contraction
functions against the closed theta-quotient expressions, and exact mode
matrices on a truncated Fock space.
"""

from .algebra import CartanMatrix, DeformationParams, make_cartan, make_params
from .currents import (
    CurrentSpec,
    OpeResult,
    closed_form,
    compose_h,
    contract,
    current_spec,
)
from .fock import (
    FockBasisState,
    FockSpace,
    ModeMatrix,
    ModeWindowError,
    enumerate_sector,
    sector_dimension,
)
from .heisenberg import (
    ModeBracketTable,
    ZeroModeWord,
    contraction_log_coeff,
    osc_coeff,
    zero_mode_reorder,
)
from .qlaurent import (
    DeltaComb,
    DeltaCombError,
    LaurentSeries,
    delta_extract,
    qpochhammer,
    series_exp,
    theta,
)
from .verifier import (
    CATALOGUE_NAMES,
    ERRATA,
    RelationResult,
    VerificationReport,
    VerifierContext,
    build_catalogue,
    phi,
    psi,
    run_suite,
    serre_coefficient,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOGUE_NAMES",
    "CartanMatrix",
    "CurrentSpec",
    "DeformationParams",
    "DeltaComb",
    "DeltaCombError",
    "ERRATA",
    "FockBasisState",
    "FockSpace",
    "LaurentSeries",
    "ModeBracketTable",
    "ModeMatrix",
    "ModeWindowError",
    "OpeResult",
    "RelationResult",
    "VerificationReport",
    "VerifierContext",
    "ZeroModeWord",
    "build_catalogue",
    "closed_form",
    "compose_h",
    "contract",
    "contraction_log_coeff",
    "current_spec",
    "delta_extract",
    "enumerate_sector",
    "make_cartan",
    "make_params",
    "osc_coeff",
    "phi",
    "psi",
    "qpochhammer",
    "run_suite",
    "sector_dimension",
    "serre_coefficient",
    "series_exp",
    "theta",
    "zero_mode_reorder",
]
