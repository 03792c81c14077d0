"""Quadrature-noise propagation of quantized pump/probe fields in a Lambda EIT medium."""

__version__ = "0.1.0"

from .errors import (ConsistencyError, DomainError, EitfluctError,
                     SingularityError, UnsupportedRegimeError)
from .medium import (CoherentNoise, FieldConfig, InputNoise, MediumParams,
                     SqueezedNoise, TabulatedNoise, coupling_constant,
                     load_params, rabi_frequencies, squeezed_preset,
                     write_params)
from .closedform import (Diagnostics, IsotropyDistances, LargeDetuningSpectrum,
                         PropagationCoefficients, RotationAngles,
                         correlation_detuned, correlation_resonance,
                         diagnostics, isotropy_distances,
                         large_detuning_spectrum, phase_difference_spectrum,
                         propagation_coefficients, q_detuned, q_resonance,
                         rotation_angle, spectrum_detuned, spectrum_resonance)
from .langevin import (AtomicSteadyState, DiffusionMatrix, FluctuationPropagator,
                       TransferMatrix, correlation, cross_spectrum,
                       diffusion_matrix, spectrum, steady_state,
                       susceptibility, transfer)
from .doppler import (DopplerConfig, SpectrumResult, doppler_nodes,
                      doppler_spectrum, doppler_sweep)

__all__ = [name for name in dir() if not name.startswith("_")]
