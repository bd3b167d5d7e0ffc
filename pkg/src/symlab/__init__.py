"""Minimum-variance symmetrizers of Bernoulli laws.

Grid linear programs over discrete measures, the piecewise-parabolic
certificate behind the bound ``Var(Y) >= p q``, and Monte Carlo checks of the
Skorokhod-embedding and Ito identities used to prove it.
"""

from .certificate import CertificateReport, certificate_bound, rho, rho_pp, verify_certificate
from .dist import (
    DiscreteDist,
    Rational,
    bernoulli,
    center,
    convolve,
    is_symmetric_about_zero,
    mean,
    negate,
    shift,
    variance,
)
from .errors import SymlabError
from .lp import LinearProgram, LpSolution, LpStatus, solve_lp
from .skorokhod import (
    EmbeddingReport,
    ExitPair,
    ItoReport,
    SimConfig,
    exit_two_point_exact,
    sample_exit_pair,
    simulate_embedding,
    simulate_ito_identity,
    verify_conditioning,
)
from .symmetrizer import (
    SymmetrizerProblem,
    SymmetrizerSolution,
    brute_force_oracle,
    build_problem,
    solve_symmetrizer,
)

__version__ = "0.1.0"
