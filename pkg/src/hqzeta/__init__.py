"""(h,q)-Bernoulli numbers, (h,q)-zeta functions and Dirichlet (h,q)-L-functions."""
from .bernoulli import (
    BetaNumberCache,
    BetaValue,
    Route,
    beta_closed_form,
    beta_convolution,
    beta_series,
    classical_bernoulli_number,
    classical_bernoulli_poly,
    difference_identity_residual,
    difference_identity_sides,
    kronecker_sides,
)
from .dirichlet import (
    CharacterTable,
    character,
    characters_mod,
    conductor,
    euler_phi,
    evaluate,
    from_canonical,
    is_principal,
    to_canonical,
)
from .errors import (
    CapError,
    ConvergenceDomainError,
    DomainError,
    HQError,
    PoleError,
    PrincipalCharacterError,
    SingularTermError,
)
from .lfunction import (
    ChiBetaValue,
    chi_beta_closed,
    chi_beta_distribution,
    chi_beta_series,
    classical_generalized_bernoulli,
    l_function,
    l_function_hurwitz,
    special_value_l,
)
from .qkernel import QParams, SeriesResult, complex_pow, q_number, q_number_complex, q_series
from .zeta import ZetaQuery, hurwitz_zeta_q, special_value, zeta_q

__version__ = "0.1.0"
