"""Sudler's sine product P_k = prod_{r<=k} |2 sin(pi r omega)| at the
golden rotation omega = (sqrt(5)-1)/2: high-precision evaluation, the
Fibonacci renormalisation subsequence and its three-factor decomposition,
sum-side bounds, and an executable verification suite.
"""

from .errors import PrecisionExhausted, PrecisionTooLow
from .fibcore import (
    FibTable,
    ZeckRep,
    fib,
    fib_floor,
    fib_length_bounds,
    fib_mod_inverse,
    zeckendorf,
)
from .goldenangle import (
    FixedFrac,
    GoldenCtx,
    SeqTerm,
    frac_r_omega,
    gen_prod,
    gen_sum,
    h_nt,
    make_ctx,
    s_nt,
    seq_term,
    xi_inf,
    xi_n,
)
from .products import (
    Decomposition,
    ProductResult,
    A_n,
    B_n,
    B_star,
    C_infinity_trunc,
    C_n,
    Q_n,
    decompose,
    profile,
    ratio_PFn_minus1,
    sudler_P,
    sudler_P_rational,
)
from .birkhoff import (
    CotSum,
    SumSeries,
    S_nt,
    S_nt_split,
    birkhoff_S,
    cot2_sum,
    cot_profile,
    cot_sum,
    frac_sum_convergent,
    identity_suite,
    lagrange_k_sin_sum,
    lagrange_sin_sum,
    sum_series,
)
from .bounds import (
    PowerLawReport,
    SplitProduct,
    convex_sine_check,
    log_lower_check,
    perturbed_product,
    power_law_scan,
    prod_bounds_check,
    split_product,
)

__version__ = "0.1.0"

__all__ = [
    "PrecisionExhausted",
    "PrecisionTooLow",
    "FibTable",
    "ZeckRep",
    "fib",
    "fib_floor",
    "fib_length_bounds",
    "fib_mod_inverse",
    "zeckendorf",
    "FixedFrac",
    "GoldenCtx",
    "SeqTerm",
    "frac_r_omega",
    "gen_prod",
    "gen_sum",
    "h_nt",
    "make_ctx",
    "s_nt",
    "seq_term",
    "xi_inf",
    "xi_n",
    "Decomposition",
    "ProductResult",
    "A_n",
    "B_n",
    "B_star",
    "C_infinity_trunc",
    "C_n",
    "Q_n",
    "decompose",
    "profile",
    "ratio_PFn_minus1",
    "sudler_P",
    "sudler_P_rational",
    "CotSum",
    "SumSeries",
    "S_nt",
    "S_nt_split",
    "birkhoff_S",
    "cot2_sum",
    "cot_profile",
    "cot_sum",
    "frac_sum_convergent",
    "identity_suite",
    "lagrange_k_sin_sum",
    "lagrange_sin_sum",
    "sum_series",
    "PowerLawReport",
    "SplitProduct",
    "convex_sine_check",
    "log_lower_check",
    "perturbed_product",
    "power_law_scan",
    "prod_bounds_check",
    "split_product",
    "__version__",
]
