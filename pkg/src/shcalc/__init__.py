"""Exact computations around symplectic cohomology of Liouville domains."""

__version__ = "0.1.0"

from .linalg import QQ, Field
from .algebra import (BACKWARD, FORWARD, DirectedSystem, GradedMap, GradedSpace, TailRule,
                      direct_limit, direct_sum, homology, inverse_limit, shift, tensor_product)
from .spectral import (Differential, Page, SpectralSystem, Verdict, degeneration_check,
                       edge_data, run_pages, turn_page)
from .morse_bott import (BoundaryModel, builtin_case, e1_circle, e1_equivariant, e1_totals,
                         e1_u_adic)
from .reeb_growth import (CountFunction, RadialProfile, ReebSpectrum, TorusPieceProfile,
                          ball_cf_degrees, ball_truncated_tower, count_torus_orbits,
                          growth_exponent, ladder_verify, orbit_spectrum, schedule_gap)
from .novikov_mc import (Deformation, DiscData, NovikovSeries, essential_verdict,
                         holonomy_weight, m0, m1, solve_mc)
from .dsl import parse_expr
from .surgery import (NonzeroFlag, SymbolicCount, Zero, Graded, eval_sh, finite_type,
                      op_degree, sphere_vanishing)
