"""Darboux-deformed magnetic fields, spectra and observables for graphene.

The low-energy electron in a graphene layer under a perpendicular magnetic
field reduces to a pair of one-dimensional partner Hamiltonians.  This
package deforms the exactly solvable constant-field (oscillator) and
decaying-field (Morse) cases through iterated first-order intertwining,
producing new solvable potentials and field profiles, their full spectra
and spinor observables, with every analytic object verified against an
independent finite-difference oracle.
"""

from .chain import (ChainConstructionError, ChainNodeError, ChainOrderingError,
                    ChainState, NonNormalizableError, SingularEvaluationError,
                    build_chain, eigenfunction_k, extend_chain, field_k,
                    field_k_recursive, new_chain, potential_k,
                    potential_k_wronskian, schrodinger_level, spectrum_k)
from .config import ConfigError, RunConfig, load_bundled, load_config, parse_config
from .fields import Grid, ScalarField
from .model import (ModelSpec, SpectrumEntry, UnitSystem, base_field,
                    base_potential, base_spectrum, bound_state_count,
                    superpotential_w0)
from .observables import (SpinorState, assemble_spinor, dirac_energy,
                          probability_current, probability_density)
from .oracle import (BoundaryLeakWarning, ConvergenceError,
                     DiagonalizationResult, diagonalize, inner_product, residual)
from .seeds import (NodelessInconclusiveError, SeedSolution, certify_nodeless,
                    morse_seed, oscillator_seed)
from .specfun import (SpecialValue, hermite, kummer_m, kummer_m_deriv, laguerre,
                      log_gamma, tricomi_u, tricomi_u_deriv)

__version__ = "0.1.0"
