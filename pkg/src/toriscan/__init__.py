"""Invariant 2-tori of a 3D volume-preserving map.

Library + CLI for detecting, classifying and continuing rotational tori of
the standard volume-preserving map using weighted Birkhoff averages, plus
the number-theoretic toolkit (resonance orders, best approximants, cubic
fields, Jacobi-Perron expansions) used to analyze which rotation vectors
give robust tori.
"""

__version__ = "0.1.0"

from .vpmap import (FrequencyVector, MapParams, OrbitDivergenceError,
                    PhaseState, force, frequency_map, inverse_frequency,
                    iterate_observable, resonance_locus_y, step, step_lift)
from .birkhoff import (AverageResult, WeightPlan, bump, make_weight_plan,
                       rotation_vector_with_dig, two_window_dig,
                       weighted_average)
from .resonance import (OrderResult, OrderStatistics, ResonanceHit,
                        is_resonant, order_statistics, resonance_distance,
                        resonance_order)
from .numtheory import (BestApproximant, JpaExpansion, best_approximants,
                        closeness_linear, closeness_simultaneous,
                        cubic_field_vector, jpa_expand, random_integral_basis,
                        znorm)
from .cubic import CubicElement, CubicField
from .sweep import (GridSpec, OrbitRecord, PeakRecord, RefineConfig,
                    SweepResult, classify_orbit, critical_set_bins,
                    cross_section, refine_peak, sweep_grid)
from .continuation import (ContinuationConfig, ContinuationPoint,
                           CriticalResult, continue_torus,
                           local_robustness_scan, locate_critical_eps,
                           solve_torus)

__all__ = [name for name in dir() if not name.startswith("_")]
