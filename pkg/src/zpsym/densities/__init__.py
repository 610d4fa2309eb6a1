"""Exact rational densities for Haar-random symmetric and general p-adic matrices."""

from .classes import (
    as_partition,
    det_dist,
    event_prob_capped,
    finite_partition_prob,
    gen_eldiv_prob,
    iter_classes,
    iter_eldivs,
    limit_constant,
    limit_partition_prob,
    partition_tail_bound,
    partitions,
    rank_dist_general,
    rank_dist_symmetric,
    rect_eldiv_prob,
    sym_class_prob,
    sym_eldiv_prob,
)
from .groups import D_sigma, alpha_ns, beta_t, orth_order, pi_n, stabilizer_measure
from .hall_littlewood import hall_littlewood_P, hall_littlewood_Q
from .intervals import Interval, IntervalProb, beta_inf, pi_inf
from .qpclass import (
    PAIRS,
    delta_n,
    isotropy_prob,
    isotropy_prob_closed,
    isotropy_prob_from_rho,
    isotropy_prob_recursive,
    m0_prob,
    rho_capped,
    rho_limit,
    rho_n,
    rho_recurrence_residual,
    rho_table,
    rho_via_blocks,
    sigma_n,
    t_operator,
    xi_coeffs,
)
from .serialize import interval_from_json, interval_to_json, rational_from_json, rational_to_json, to_json

__all__ = [name for name in dir() if not name.startswith("_")]
