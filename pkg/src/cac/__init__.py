"""A kernel and command-line checker for a calculus of constructions
extended with user-declared rewrite rules at the object and predicate
level: type checking, confluence and termination evidence, positivity
and inductive-structure checks, and a strong-normalization verdict."""

from .admissibility import (AdmissibilityReport, Outcome, OverallVerdict,
                            check_admissible, check_type_preservation,
                            partition_defined, system_properties)
from .cic import (GeneratedBundle, InductiveDecl, certify_bundle,
                  generate_iota_rules, selim_for_motive, translate_inductive)
from .orderings import rpo_greater, rpo_terminates
from .positivity import (PolarityReport, PredicateClass,
                         check_inductive_structure, classify_predicate,
                         polarity)
from .printer import pp
from .rewriting import (ConfluenceLevel, ConfluenceVerdict, CriticalPair,
                        RewriteRule, confluence_check, critical_pairs,
                        joinable, left_linear, match_first_order, normalize,
                        reduce_one, step, unify)
from .schema import (AccPair, CCJudgment, SchemaVerdict, acc_step,
                     args_greater, cc_check, check_well_formed, derived_type,
                     satisfies_general_schema)
from .signature import (InductiveStructure, Precedence, Signature,
                        SymbolDecl)
from .syntax import LoadedFile, ParseError, load, parse
from .terms import (Abs, App, BOX, BVar, CacError, Environment, FuelExhausted,
                    Position, Prod, Sort, SortT, STAR, Substitution, Symb,
                    Term, Var, Variable, alpha_eq, arrow, free_vars,
                    is_algebraic, lam, pi, positions, positions_of,
                    replace_at, subst_apply, subterm_at)
from .typing import TypeChecker, TypingDerivation, TypingError, replay

__version__ = "1.0.0"
