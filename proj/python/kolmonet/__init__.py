"""ReLU networks that approximate solutions of Kolmogorov PDEs."""

from ._kolmonet import (
    DomainError,
    Network,
    ParseError,
    PlannerOverflow,
    RegularityParams,
    ShapeError,
    Solution,
    average_nets,
    compose,
    dnn_error_bound_log10,
    dnn_param_bound_log10,
    exact_solution,
    frak_D,
    identity_net,
    mc_lp_error_bound_log10,
    parallel_disjoint,
    plan_budget,
    problem_names,
    problem_params,
    product_net,
    scale_output,
    solve,
    square_net,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
