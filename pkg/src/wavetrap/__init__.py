"""Predict, design and verify particle arrangements in acoustic standing waves."""
from .bravais import BravaisEntry, DesignRequest, all_entries, catalog, design, lookup, reciprocal_vectors
from .dynamics import ParticleEnsemble, RelaxResult, grad_psi, relax
from .estimators import RadiationPotential, TrapRelaxation
from .exceptions import (
    ConvergenceError,
    DegenerateBasisError,
    DimensionMismatchError,
    DivergenceError,
    InvalidParameterError,
    NotSymmetricError,
    UnequalWavenumberError,
    UnknownClassError,
    WavetrapError,
)
from .levelsets import (
    Classification,
    LineFamilySet,
    NotCanonicalError,
    PlaneFamilySet,
    PointLatticeSet,
    SubspaceSet,
    canonical_form,
    classify,
    classify_amplitudes,
    r_set,
    t_pm_set,
    t_set,
)
from .potential import build_M, build_Q, phase_shift, psi, psi_direct, q0_closed_form, retarget
from .sampling import FieldGrid, VerificationReport, numeric_minima, sample, verify
from .spectral import (
    SpectralDecomposition,
    general_decomposition,
    h_split,
    min_eigenvector,
    q0_decomposition,
    symmetric_eig,
)
from .wavefield import (
    Coefficients,
    MediumParams,
    ParticleParams,
    WaveConfig,
    derive_coefficients,
    pressure,
    pressure_gradient,
    pressure_hessian,
    wave_config_from_K,
)

__version__ = "0.1.0"
