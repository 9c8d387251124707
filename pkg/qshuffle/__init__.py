"""
qshuffle - exact verification of fused R-, Ř- and K-matrices over the q-shuffle algebra.
"""

__version__ = "0.1.0"

from .errors import QShuffleError, UsageError, RadicalError, GradingError
from .scalar import Scalar, ExactField, NumericField, EXACT, qint, qfact, sqrt_brackets, eval_numeric
from .words import WordPoly, concat, shuffle, zeta, swap_letters, erase, catalan_words, is_catalan, height, alternating_word
from .series import MultiSeries, MonomialArg, gen_series, delta_n, delta_series, tdelta_series
from .matrix import Mat, LegSpec, Witness, mat_mul, kron, leg_embed, mat_equal, mat_residual
from .constructors import Spin, build_E, build_F, build_H, build_R, build_R_half_closed, build_Rhat, build_K, build_D, build_Kbar
from .check_config import CheckSpec
from .verifier import Report, run_spec, run_suite
