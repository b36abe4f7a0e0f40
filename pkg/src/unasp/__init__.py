"""Answer set solving for weighted rules over sub-intervals of [0,1]."""

from .intervals import (INCONSISTENT, EPS_CMP, Interval, OrderFamily,
                        Ordering, compare, kagg, kmax, naf, negate, tconorm,
                        tnorm)
from .program import (Atom, ConstItem, LitItem, Literal, ParseError, Program,
                      Rule, ground, parse_program)
from .transform import (TransformedProgram, body_expr, r_join, simplify,
                        substitute, transform_program)
from .semantics import (ConsistencyClass, UnboundLiteral, classify_consistency,
                        evaluate, is_answer_set, is_supported_model, reduct,
                        satisfies, total_from_positive)
from .mi import MiState, gamma_step, mi_fixpoint
from .depgraph import (AnalysisOverflow, CyclicVpg, DepGraph,
                       NoValidAssumptionSet, NonConstantOperand,
                       build_dep_graph, build_vpg, enumerate_cycles,
                       intersection_table, scc_condense,
                       select_assumption_set)
from .nmi import (ContractionReport, GainVector, NmiConfig, NmiOutcome,
                  StructuralMismatch, branch_and_bound, check_contraction,
                  cycle_gain, nmi_iterate, solve_kagg_cycle)
from .solver import SolveReport, SolverConfig, solve
from .cli import run_cli

__version__ = "0.1.0"
