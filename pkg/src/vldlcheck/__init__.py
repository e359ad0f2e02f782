"""Satisfiability and model checking for visibly linear dynamic logic.

The pipeline compiles a formula into a one-way alternating jump automaton,
translates that into a Buchi tree automaton over stack-tree encodings of
infinite nested words, and decides emptiness through Buchi games. Lasso
witnesses are decoded back from accepted regular trees.
"""

from .alphabet import (LassoWord, PushdownAlphabet, cardinal_positions,
                       default_alphabet, is_well_matched, matching_return,
                       parse_alphabet, parse_word_spec, stack_height)
from .aja import OneAja, lasso_accepts
from .aja2tree import aja_to_stacktree_automaton
from .caps import set_stage_cap, stage_cap
from .errors import (InputError, MalformedWitnessError, ResourceError,
                     UnsupportedInputError, VldlError)
from .formula import (Atom, Box, Diamond, NegAtom, Not, And, Or,
                      TvpaLibrary, closure, false_formula, formula_size,
                      formula_to_str, parse_formula, to_nnf, true_formula)
from .oracle import CrossCheckReport, cross_check, eval_lasso
from .pipeline import (Verdict, model_check, satisfiable,
                       validate_counterexample, validate_model, vps_to_tree)
from .stacktree import (cardinal_addresses, decode, encode, encode_lasso,
                        stack_tree_recognizer)
from .treeauto import (BuchiTreeAutomaton, contains, intersect, is_empty,
                       universal_automaton, witness)
from .trees import BOT, FiniteTree, RegularTree, constant_tree, tree_to_dot
from .vldl2aja import compile_formula
from .vps import Tvpa, Vps, parse_system, run_on_lasso, successors

__version__ = "0.1.0"

__all__ = [
    "LassoWord", "PushdownAlphabet", "cardinal_positions",
    "default_alphabet", "is_well_matched", "matching_return",
    "parse_alphabet", "parse_word_spec", "stack_height",
    "OneAja", "lasso_accepts", "aja_to_stacktree_automaton",
    "set_stage_cap", "stage_cap",
    "InputError", "MalformedWitnessError", "ResourceError",
    "UnsupportedInputError", "VldlError",
    "Atom", "Box", "Diamond", "NegAtom", "Not", "And", "Or",
    "TvpaLibrary", "closure", "false_formula", "formula_size",
    "formula_to_str", "parse_formula", "to_nnf", "true_formula",
    "CrossCheckReport", "cross_check", "eval_lasso",
    "Verdict", "model_check", "satisfiable", "validate_counterexample",
    "validate_model", "vps_to_tree",
    "cardinal_addresses", "decode", "encode", "encode_lasso",
    "stack_tree_recognizer",
    "BuchiTreeAutomaton", "contains", "intersect", "is_empty",
    "universal_automaton", "witness",
    "BOT", "FiniteTree", "RegularTree", "constant_tree", "tree_to_dot",
    "compile_formula",
    "Tvpa", "Vps", "parse_system", "run_on_lasso", "successors",
]
