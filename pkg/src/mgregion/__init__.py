"""Multiplexing-gain regions for a random-activity line network.

A line of K Tx/Rx pairs with adjacent-only interference, random per-user
activity, mixed fast/slow traffic and a finite cooperation budget D.  The
package evaluates the closed-form inner and outer bounds on the per-user
(fast, slow) MG region, schedules two concrete transmission schemes on given
realizations, and cross-checks everything by exhaustive enumeration and
Monte Carlo simulation.
"""

from .bounds import (
    INNER_THEOREM1,
    INNER_TIMESHARE,
    OUTER,
    MgPoint,
    MgRegion,
    compute_m,
    exact_expectation,
    finite_k_expectation,
    first_sum_closed,
    first_sum_truncated,
    inner_region,
    outer_region,
    region_contains,
    region_to_csv,
    region_to_json_dict,
    scheme1_corner,
    scheme1_corner_series_gap,
    scheme1_slow_mg_series,
    scheme2_point,
    second_sum_closed,
    second_sum_truncated,
    series_identities,
    slow_mg_cap,
    third_sum_closed,
    third_sum_truncated,
)
from .model import (
    BUILTIN_REALIZATIONS,
    ActivityRealization,
    NetworkConfig,
    Subnet,
    SubnetDecomposition,
    decompose_subnets,
    sample_activity,
    subnet_length_pmf,
)
from .montecarlo import MgEstimate, discrepancy_report, estimate_mg
from .scheduler import (
    FAST,
    INACTIVE,
    SILENCED,
    SLOW,
    SLOW_EDGE,
    PatternCondition,
    PhaseSchedule,
    RealizationMg,
    Scheme,
    converse_sum_bound,
    pattern_for,
    realization_mg,
    schedule_scheme1,
    schedule_scheme2,
    scheme1_subnet_sum,
    silenced_offsets,
)

__version__ = "0.1.0"
