"""Convergence sweeps and checks"""
from lpvoronoi.analysis.convergence import (
    DEFAULT_P_LIST,
    ErrorBudget,
    MonotoneVerdict,
    SweepReport,
    SweepRow,
    check_containment,
    check_error_budget,
    check_monotone,
    converge_sweep,
    error_budget,
    mirror_p_list,
    two_sided_gaps,
)

__all__ = [
    'DEFAULT_P_LIST', 'ErrorBudget', 'MonotoneVerdict', 'SweepReport', 'SweepRow',
    'check_containment', 'check_error_budget', 'check_monotone', 'converge_sweep',
    'error_budget', 'mirror_p_list', 'two_sided_gaps',
]
