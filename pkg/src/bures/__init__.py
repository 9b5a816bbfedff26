"""Euler-angle coordinates and Bures measures for 2- and 3-state density matrices.

The package maps (n^2 - 1)-dimensional rectangular angle coordinates onto
density matrices, evaluates the Bures coordinate density (eigenvalue-simplex
factor times the invariant coset density of the truncated Euler product),
integrates functionals against the normalized measure, and draws
Bures-distributed samples with reproducible counter-based streams.
"""

from .generators import GeneratorSet, gell_mann, generator_set, pauli
from .linalg import (HermitianEigenResult, NonHermitianError, dagger,
                     eig_hermitian, expm_i_generator, matmul, trace)
from .euler import (THETA2_MAX, AngleRangeError, CosetAngles, DensityMatrixParams,
                    EigenvalueAngles, Inverse2Result, NotADensityMatrixError,
                    coset_unitary, density_from_params, diag_eigenvalues,
                    euler_unitary, params_from_density_2, params_from_values,
                    validate_density)
from .measure import (AngleBox, MeasureValue, NormalizationMode, angle_box,
                      bures_joint_density, coset_normalization_constant,
                      eigenvalue_jacobian, haar_coset_density, hall_density,
                      normalization_constant)
from .functionals import (FunctionalId, FunctionalKind, eigenvalue_moment,
                          purity, von_neumann_entropy)
from .tensorgrid import QuadratureRule, QuadratureSpec, tensor_quadrature
from .integrate import IntegrationResult, integrate, integrate_mc
from .sampling import (EnvelopeViolationError, SampleBatch, SamplerSpec,
                       estimate_envelope, sample, sample_coset)

__version__ = "0.1.0"

__all__ = [
    "AngleBox", "AngleRangeError", "CosetAngles", "DensityMatrixParams",
    "EigenvalueAngles", "EnvelopeViolationError", "FunctionalId",
    "FunctionalKind", "GeneratorSet", "HermitianEigenResult",
    "IntegrationResult", "Inverse2Result", "MeasureValue",
    "NonHermitianError", "NormalizationMode", "NotADensityMatrixError",
    "QuadratureRule", "QuadratureSpec", "SampleBatch", "SamplerSpec",
    "THETA2_MAX", "angle_box", "bures_joint_density",
    "coset_normalization_constant", "coset_unitary", "dagger",
    "density_from_params", "diag_eigenvalues", "eig_hermitian",
    "eigenvalue_jacobian", "eigenvalue_moment", "estimate_envelope",
    "euler_unitary", "expm_i_generator", "gell_mann", "generator_set",
    "haar_coset_density", "hall_density", "integrate", "integrate_mc",
    "matmul", "normalization_constant", "params_from_density_2",
    "params_from_values", "pauli", "purity", "sample", "sample_coset",
    "tensor_quadrature", "trace", "validate_density", "von_neumann_entropy",
]
