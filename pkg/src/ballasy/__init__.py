"""Numerical verification of two-sided boundary estimates for integrals on the complex unit ball."""

from .exceptions import (BallAsyError, CaseDriftError, DimensionError, DomainError,
                         QuadratureError, UncoveredRegimeError)
from .geometry import (CPoint, MobiusMap, as_point, bergman_metric, in_bergman_ball, inner,
                       mobius, mobius_defect, random_ball_points)
from .weights import GSeries, NormalWeight, build_g, g_deriv, g_eval, normality_check, weight_eval
from .quadrature import (IntegrationResult, QuadConfig, RadialWeight, integrate_ball,
                         integrate_circle, integrate_disc, integrate_radial, integrate_sphere)
from .kernels import FAMILY_PARAMS, KernelFamily, PointPair, eval_lhs, family
from .asymptotics import (Case, CaseId, classify, eval_rhs, lookup_case, note1_constant,
                          note1_forms, predicted_exponent, sup_bound_21, sup_x_eps_log)
from .verifier import (SweepPlan, SweepReport, SweepRow, Verdict, fit_boundary_exponent,
                       representative_plans, run_sweep, verdict)
from .spaces import (HoloFunction, SpaceParams, bergman_reproduce, bloch_norm, catalog,
                     criteria_record, fpms_local, fpms_norm, gradient, lemma24_check,
                     matched_nu, multiplier_criteria, prop33_check, sup_grid)

__version__ = "0.1.0"
