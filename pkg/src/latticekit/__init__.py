from ._exceptions import (
    LatticeKitError,
    LatticeError,
    NotALatticeError,
    CyclicCoversError,
    NoBoundedStructureError,
    DuplicateNameError,
    UnknownElementError,
    LatticeMismatchError,
    SizeGuardError,
    TermError,
    TermSyntaxError,
    UnknownIdentifierError,
    ArityViolationError,
    UnboundVariableError,
    IdentifierCollisionError,
    FunctionalError,
    CapacityNotNormalizedError,
    CapacityNotMonotoneError,
    EmptyFamilyError,
    EmptyMemberError,
    NotAConeError,
    FormatError,
    InvalidConfigError,
    InternalConsistencyError,
    exit_code_for,
)

from ._settings import Guards, configure, get_guards

from ._models import Verdict

from ._lattice import (
    Lattice,
    lattice_from_covers,
    chain,
    boolean_lattice,
    product,
    n5,
    m3,
    CATALOG,
    catalog_lattice,
    is_distributive,
    is_completely_distributive,
    validate_lattice,
)

from ._maps import (
    EndoMap,
    is_continuous,
    continuity_defect,
    enumerate_continuous,
    meet_translation,
    join_translation,
    compose,
    apply_pointwise,
)

from ._space import FunctionalTable, Capacity, input_space

from ._terms import (
    Term,
    Var,
    Const,
    Meet,
    Join,
    parse,
    print_term,
    evaluate,
    table_of,
    NormalForm,
    dnf_of,
    cnf_of,
    term_of,
    equivalent,
    median_term,
)

from ._functionals import (
    characteristic_input,
    med,
    is_nondecreasing,
    is_idempotent,
    is_homogeneous,
    range_hull,
    is_range_homogeneous,
    clamp_to_range,
    is_invariant,
    invariance_defect,
    sugeno_integral,
    sugeno_table,
    p_lower,
    p_upper,
    is_polynomial,
    is_sugeno,
    is_term_functional,
    is_aggregation,
    ClassificationReport,
    classify,
    term_functional_from_family,
    extension_from_boolean,
    median_table,
    homogeneous_non_monotone_example,
)

from ._duality import (
    SetFamily,
    Cone,
    is_cone,
    extend_to_ultracone,
    is_ultracone,
    crosscut_values,
    find_crosscut_violation,
    transversals,
    blocker,
    minimal_members,
    up_closure,
    check_blocker_duality,
    verify_complete_distributivity,
    check_complete_distributive_law,
)

from ._formats import (
    parse_lattice,
    lattice_to_text,
    read_lattice,
    load_lattice,
    parse_functional,
    functional_to_text,
    read_functional,
    parse_capacity,
    capacity_to_text,
    read_capacity,
)

__all__ = [
    "LatticeKitError",
    "LatticeError",
    "NotALatticeError",
    "CyclicCoversError",
    "NoBoundedStructureError",
    "DuplicateNameError",
    "UnknownElementError",
    "LatticeMismatchError",
    "SizeGuardError",
    "TermError",
    "TermSyntaxError",
    "UnknownIdentifierError",
    "ArityViolationError",
    "UnboundVariableError",
    "IdentifierCollisionError",
    "FunctionalError",
    "CapacityNotNormalizedError",
    "CapacityNotMonotoneError",
    "EmptyFamilyError",
    "EmptyMemberError",
    "NotAConeError",
    "FormatError",
    "InvalidConfigError",
    "InternalConsistencyError",
    "exit_code_for",
    "Guards",
    "configure",
    "get_guards",
    "Verdict",
    "Lattice",
    "lattice_from_covers",
    "chain",
    "boolean_lattice",
    "product",
    "n5",
    "m3",
    "CATALOG",
    "catalog_lattice",
    "is_distributive",
    "is_completely_distributive",
    "validate_lattice",
    "EndoMap",
    "is_continuous",
    "continuity_defect",
    "enumerate_continuous",
    "meet_translation",
    "join_translation",
    "compose",
    "apply_pointwise",
    "FunctionalTable",
    "Capacity",
    "input_space",
    "Term",
    "Var",
    "Const",
    "Meet",
    "Join",
    "parse",
    "print_term",
    "evaluate",
    "table_of",
    "NormalForm",
    "dnf_of",
    "cnf_of",
    "term_of",
    "equivalent",
    "median_term",
    "characteristic_input",
    "med",
    "is_nondecreasing",
    "is_idempotent",
    "is_homogeneous",
    "range_hull",
    "is_range_homogeneous",
    "clamp_to_range",
    "is_invariant",
    "invariance_defect",
    "sugeno_integral",
    "sugeno_table",
    "p_lower",
    "p_upper",
    "is_polynomial",
    "is_sugeno",
    "is_term_functional",
    "is_aggregation",
    "ClassificationReport",
    "classify",
    "term_functional_from_family",
    "extension_from_boolean",
    "median_table",
    "homogeneous_non_monotone_example",
    "SetFamily",
    "Cone",
    "is_cone",
    "extend_to_ultracone",
    "is_ultracone",
    "crosscut_values",
    "find_crosscut_violation",
    "transversals",
    "blocker",
    "minimal_members",
    "up_closure",
    "check_blocker_duality",
    "verify_complete_distributivity",
    "check_complete_distributive_law",
    "parse_lattice",
    "lattice_to_text",
    "read_lattice",
    "load_lattice",
    "parse_functional",
    "functional_to_text",
    "read_functional",
    "parse_capacity",
    "capacity_to_text",
    "read_capacity",
]
