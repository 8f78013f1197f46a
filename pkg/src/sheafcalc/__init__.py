"""Intermediate logics of finite Grothendieck toposes and finite locales."""

from .coverage import (GrothendieckTopology, all_sieves, closed_sieves, closure, degenerate_topology,
                       enumerate_topologies, generate_topology, is_closed, is_topology, join_topologies,
                       trivial_topology)
from .criteria import (gd_factorization, gd_site_criterion, is_groupoid, is_indecomposable_bruteforce,
                       is_indecomposable_char, is_stably_nonempty, kp_presheaf_criterion,
                       kp_stably_nonempty_criterion, right_ore)
from .errors import (CapExceeded, CategoryError, DocumentError, FrameError, NotClosedError, NucleusError,
                     ParseError, SheafcalcError, SieveError, TopologyError, UnboundVariable, UnknownLogic)
from .fincat import (FinCategory, Sieve, empty_sieve, generate_sieve, make_sieve, maximal_sieve,
                     pullback_sieve, sieve_intersection, sieve_union, validate_category)
from .frames import (Filter, FiniteFrame, Nucleus, demorganization_direct, enumerate_nuclei, filter_generated,
                     gd_sublocale_direct, heyting_imp, l_sublocale, nucleus_checks, nucleus_from_topology,
                     pseudo_not, quotient_by_filter, site_from_frame)
from .logic import (HornSequent, LogicSpec, eval_in_frame, holds_in_frame, is_admissible, lookup,
                    parse_sequent, parse_term, registry, to_text)
from .ltop import (booleanization, dense_restriction, demorgan_generators_direct, demorganization,
                   is_dense_over, is_implicationally_open, is_weakly_open, l_topology,
                   l_topology_maximality_check, relativization_check)
from .omega import (Site, eval_term_omega, holds_internally, omega_bottom, omega_implies, omega_join,
                    omega_meet, omega_not, omega_top, subobject_frame, validates_logic)

__version__ = "0.1.0"
