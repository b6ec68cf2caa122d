"""Time-dependent resonance interaction between two entangled two-level atoms.

Closed-form energies (:mod:`.resonance`), field energy densities and probe
forces (:mod:`.field`), dipole tensors (:mod:`.tensor`), sine/cosine
integrals (:mod:`.specfun`) and an independent quadrature oracle
(:mod:`.oracle`).  Natural units with c = 1.
"""
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    LightConeSingularity,
    ResonanceError,
    SingularityError,
    StencilError,
)
from .field import (
    FieldMapSample,
    GridSpec,
    field_map,
    interference_density,
    probe_energy,
    probe_force,
    single_atom_density,
    total_density,
)
from .oracle import QuadratureSettings, delta_e_quadrature, integral_I1, integral_I2
from .resonance import (
    AtomPairConfig,
    CouplingMode,
    DickeParity,
    EnergyTrace,
    decompose,
    delta_e,
    delta_e_stationary,
    energy_trace,
)
from .specfun import SpecialFunctionResult, cos_integral, shifted_sin_integral, sin_integral
from .tensor import DipoleFieldTensor, PotentialTensor, contract, dipole_field_tensor, potential_tensor
from .units import SIEstimateInput, si_force_estimate

__version__ = "0.1.0"
