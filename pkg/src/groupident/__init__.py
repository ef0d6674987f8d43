"""Group identification: social rules, manipulative attacks, and their solvers."""

from .model import (
    ADD,
    BRIBERY,
    CONSTRUCTIVE,
    CSR,
    DELETE,
    DESTRUCTIVE,
    EXACT,
    GENERAL,
    IC,
    LSR,
    MICROBRIBERY,
    RELAXED_DELETE,
    TWO_IC,
    TWO_LIC,
    AttackInstance,
    Classification,
    InvalidInstance,
    Rule,
    Society,
    Solution,
    SolutionMismatch,
    Verdict,
    VerifyResult,
    add_set,
    apply_solution,
    bribe,
    classify_instance,
    consent,
    delete_set,
    instance_from_json,
    instance_to_json,
    make_society,
    microbribe,
    random_instance,
    society_from_json,
    society_to_json,
    solution_from_json,
    solution_to_json,
    verify_solution,
)
from .rules import RuleTrace, evaluate, trace

__all__ = [
    "ADD", "BRIBERY", "CONSTRUCTIVE", "CSR", "DELETE", "DESTRUCTIVE", "EXACT",
    "GENERAL", "IC", "LSR", "MICROBRIBERY", "RELAXED_DELETE", "TWO_IC", "TWO_LIC",
    "AttackInstance", "Classification", "InvalidInstance", "Rule", "RuleTrace",
    "Society", "Solution", "SolutionMismatch", "Verdict", "VerifyResult",
    "add_set", "apply_solution", "bribe", "classify_instance", "consent",
    "delete_set", "evaluate", "instance_from_json", "instance_to_json",
    "make_society", "microbribe", "random_instance", "society_from_json",
    "society_to_json", "solution_from_json", "solution_to_json", "trace",
    "verify_solution",
]

__version__ = "0.1.0"
