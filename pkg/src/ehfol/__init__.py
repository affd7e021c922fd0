"""Numerical workbench for Euclidean-hyperboloidal foliations.

Builds the hybrid hyperboloidal/flat slicing of Minkowski spacetime from
its defining ODE, provides the adapted vector-field frames with exact
commutators, evaluates weighted wave-Klein-Gordon energies on the leaves,
estimates the constants of the slice Sobolev inequalities empirically,
and evolves radial wave/Klein-Gordon model systems to measure decay
rates along the foliation.
"""

__version__ = "0.1.0"

from .cutoffs import (CutoffProfile, chi, chi_prime, default_profile, rho,
                      weight_omega, xi)
from .foliation import (Region, SliceSample, TimeFunctionTable,
                        build_time_function, classify_region, eval_drT,
                        eval_dsT, eval_T, slice_points)
from .frames import (VectorField, admissible_fields, apply_field,
                     apply_multiindex, commutator,
                     commute_with_operator_residual, make_field)
from .energy import (EnergyReport, FieldOnSlice, energy_flat_form,
                     energy_frame_form, energy_series, sample_field, zeta)
from .sobolev import (ConstantEstimate, TestFamily, constant_sweep,
                      exterior_ratio, gaussian_family, interior_ratio,
                      slow_tail_family, zero_family)
from .evolution import (BlowUpError, DecayFit, EvolutionConfig,
                        SpacetimeGrid, decay_series, evolve_radial,
                        fit_decay, manufactured_convergence,
                        sample_on_slices)
from .waves import free_wave_field

__all__ = [
    "__version__",
    "CutoffProfile", "chi", "chi_prime", "default_profile", "rho",
    "weight_omega", "xi",
    "Region", "SliceSample", "TimeFunctionTable", "build_time_function",
    "classify_region", "eval_T", "eval_drT", "eval_dsT", "slice_points",
    "VectorField", "admissible_fields", "apply_field", "apply_multiindex",
    "commutator", "commute_with_operator_residual", "make_field",
    "EnergyReport", "FieldOnSlice", "energy_flat_form", "energy_frame_form",
    "energy_series", "sample_field", "zeta",
    "ConstantEstimate", "TestFamily", "constant_sweep", "exterior_ratio",
    "gaussian_family", "interior_ratio", "slow_tail_family", "zero_family",
    "BlowUpError", "DecayFit", "EvolutionConfig", "SpacetimeGrid",
    "decay_series", "evolve_radial", "fit_decay",
    "manufactured_convergence", "sample_on_slices",
    "free_wave_field",
]
