"""Morse-Bott-Floer spectral sequences of symplectic C*-manifolds, at the level of ranks."""

from .errors import (CriticalLambda, CrossCheckFailure, FloerSeqError, HypothesisNotMet, Infeasible,
                     InconsistentEuler, MaslovMismatch, MissingQuotientData, NegativeRank,
                     NonPositiveMaslov, NotContracting, SpecParseError, UnsupportedInput)
from .graded import (EulerProfile, GradedRanks, IntersectionForm, gysin_sphere_bundle,
                     leray_hirsch_projectivization, shift_down, slice_cohomology)
from .model import (BlockTopClass, BundleStructure, Diagnostic, ExplicitStructure, FiltrationFullAt,
                    FixedComponent, ManifoldSpec, TorsionFamily, UnitKilledByPillar, UnstableOnly,
                    WeightMultiset, total_cohomology, validate_spec)
from .index import floer_index, maslov_index, slice_grading, w_eval
from .page import E1Page, assemble_e1, required_window
from .solver import FiltrationReport, solve_filtration
from .equivariant import (assemble_equivariant_page, eq27_identity, equivariant_filtration_bounds,
                          solve_equivariant_slice)
from .presets import ade_spec, get_preset, preset_names, static_specs, twisted_projective_spec
from .cli import dump_spec, parse_spec, render

__version__ = "0.1.0"
