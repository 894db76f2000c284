"""First Dirichlet eigenvalues of surfaces of revolution, their maximizers, and critical profiles."""
from .errors import (BracketError, CurveError, DegeneratePhaseError, DomainError, GuardError,
                     InversionFailed, LeftHalfPlaneError, NoZeroBeforeBoundError, RevLambdaError)
from .geometry import (CircleSpec, HalfPlanePoint, ProfileCurve, arclength_reparametrize,
                       chord_replace, constant_speed_samples, curve_length, from_function,
                       invert_in_circle, radial_extent, resample, segment, validate_curve)
from .reference_spectra import (AnnulusSpec, annulus_lambda1, bessel_j0, bessel_y0,
                                disc_lambda1, j0_first_zero, radial_node)
from .spectral import (SpectralResult, TridiagonalPencil, assemble, euler_lagrange_residual,
                       lambda1, rayleigh_quotient, richardson)
from .critical_ode import (CriticalTrajectory, RescaledTrajectory, berger_residual,
                           endpoint_jacobian, endpoint_map, flux, guard_report,
                           integrate_critical, integrate_rescaled, length_bound)
from .shooting import EndpointRecord, solve_boundary, uniqueness_scan
from .maximizer import (MaximizerReport, OptimizerConfig, disc_type_bound,
                        improvement_move_audit, optimize)

__version__ = "0.1.0"
