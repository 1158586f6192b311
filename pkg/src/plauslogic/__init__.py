"""Probabilistic many-valued logic on likelihood vectors.

Propositions are probability vectors over ordered truth classes, connectives
are admissible 0/1 push-forwards of tensor products, and the same operations
are realized as stationary states of fermionic rate equations.
"""

from .connectives import (
    ClassFunction,
    EnumerationTooLarge,
    and_map,
    connective_map,
    count_admissible,
    enumerate_admissible,
    from_class_function,
    implies_map,
    lift_arity,
    not_map,
    or_map,
)
from .formula import (
    And,
    ArityMismatchError,
    Atom,
    EvaluationError,
    Implies,
    Not,
    Or,
    ParseError,
    UnboundAtomError,
    atoms,
    compile_boolean,
    evaluate,
    parse,
    to_text,
)
from .likelihood import (
    AdmissibleMap,
    Likelihood,
    Validation,
    apply,
    compose,
    kron,
    matrix_form,
    tensor,
    tensor_all,
    validate,
)

__version__ = "0.1.0"
