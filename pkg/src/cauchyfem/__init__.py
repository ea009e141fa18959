"""Stabilized primal-dual finite elements for the elliptic Cauchy problem."""

from .analysis import (ErrorReport, XiCurve, convergence_rate, error_report,
                       eta, fe_jump_seminorm, h1_semi_error, l2_error,
                       l2_norm_field, poincare_ratio, stab_seminorm_u,
                       stab_seminorm_z, xi_eval, xi_fit)
from .assembly import (BlockSystem, assemble_blocks, assemble_data_term,
                       assemble_dual_stab, assemble_load, assemble_primal_stab,
                       assemble_stiffness)
from .experiments import (RunConfig, run_convergence, run_single, run_sweep,
                          solve_level)
from .mesh import (BoundaryPart, Mesh, build_structured, face_geometry,
                   from_triangles, mesh_size, tag_boundary, unit_square_mesh)
from .problem import CauchyProblem, quartic_example
from .solver import (DiscreteSolution, SaddleSystem, SingularSystemError,
                     build_system, discrete_consistency_probe, solve,
                     solve_problem)
from .spaces import (FeSpace, QuadratureRule, build_space, eval_fe,
                     nodal_interpolant, segment_rule, shape_eval, triangle_rule)

__version__ = "0.1.0"
