"""Exact dynamics of degenerating complex rational maps at the Gauss point.

A family f_t is a rational map over Puiseux series in t.  The package
computes reductions, the orbit of the Gauss point, quantized measures on the
Gauss-point skeleta, the atomic limit of the maximal-entropy measures of f_t
as t → 0, and a Monte Carlo check of that limit.
"""

__version__ = "0.1.0"

from .berkovich import (CLASSICAL_INFINITY, GAUSS_POINT, DirectionLabel, Moebius, TypeIIPoint,
                        direction_at, hyperbolic_distance, join, moebius_gauss_image,
                        moebius_image, on_segment, on_segment_to_classical)
from .dynamics import (DirectionalData, Orbit, conjugated_reduction, directional_data,
                       image_of_gauss, iterated_directional_data, orbit_of_gauss,
                       target_rescaling)
from .errors import *  # noqa: F401,F403
from .family import RationalMapFamily
from .familyio import FamilySpec, format_family, parse_family
from .gaussian import GaussianRational
from .limit import (CaseReport, classify_case, delta_f_description, exceptional_fixed_check,
                    limit_measure, nu_mass_exceptional_direction)
from .measures import AtomicComplexMeasure
from .quantized import (AdmissiblePair, Partition, QuantizedMeasure, check_admissible,
                        degenerate_pullback, delta_witness, mu_from_omega, omega_from_mu,
                        project_measure, quantized_balance_check, quantized_local_degree,
                        quantized_pullback)
from .reduction import ReducedMap, divisor_support, gauss_totally_invariant_test, reduce_map
from .residue import Form, GPoly, ResidueMap, ResiduePoint
from .series import PuiseuxSeries, parse_series, precision_context, valuation
from .verifier import (ComplexMapInstance, EmpiricalMeasure, backward_orbit_measure,
                       compare_measures, convergence_study, specialize)
