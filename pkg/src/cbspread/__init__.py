"""Competitive two-source information spread with confirmation bias.

Opinion dynamics, closed-form steady states, the pure Nash equilibrium of
the zero-sum source game, and brute-force oracles that cross-check it.
"""
from .dynamics import (BiasParams, OpinionState, Scenario, SourcePair, influence_weights,
                       resistance, simulate, step, steady_state_closed_form)
from .errors import (AssumptionError, CBSpreadError, DomainError, InconsistencyError,
                     IterationLimitError, NumericalError, ParseError, ValidationError)
from .game import (Branch, EquilibriumResult, GameScalars, cb_influence, corollary_specials, cost,
                   delta_fn, game_scalars, m_fn, nash_equilibrium, partial_f_g, partial_f_h, q_fn,
                   r_fn, solve_scenario, w_fn)
from .network import (AssumptionReport, SocialNetwork, check_assumption1, krackhardt_network,
                      krackhardt_weights, load_edge_list, load_json_network, row_sums)
from .spectral import SpectralData, centrality_average, dominant_eigenpair

__version__ = "0.1.0"
