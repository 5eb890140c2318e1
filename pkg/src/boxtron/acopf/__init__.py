"""Component-based ADMM for AC optimal power flow."""
from .admm import AdmmOptions, AdmmResult, AdmmState, AdmmStatus, admm_solve
from .branch import BranchParams, BranchSubproblem, branch_eval, branch_params, line_flows
from .case import NetworkCase, bundled_case, load_case, parse_matpower

__all__ = [
    "AdmmOptions",
    "AdmmResult",
    "AdmmState",
    "AdmmStatus",
    "BranchParams",
    "BranchSubproblem",
    "NetworkCase",
    "admm_solve",
    "branch_eval",
    "branch_params",
    "bundled_case",
    "line_flows",
    "load_case",
    "parse_matpower",
]
