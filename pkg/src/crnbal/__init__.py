"""Complex, formal and detailed balancing of mass-action reaction networks.

The Matrix-Tree vector ``rho`` of the graph-of-complexes Laplacian turns each
balancing question into exact multiplicative identities over integer kernel
bases; :mod:`crnbal.dynamics` checks the verdicts against simulated
trajectories and the Gibbs Lyapunov function.
"""

from crnbal.balance import (
    BalanceVerdict,
    ConductanceDecomposition,
    EquilibriumCertificate,
    PotentialCertificate,
    ViolationWitness,
    balanced_laplacian,
    conductance_decomposition,
    deficiency,
    equilibrium_set_membership,
    is_complex_balanced,
    is_detailed_balanced,
    is_formally_balanced,
    network_deficiency,
    verify_certificate,
)
from crnbal.dynamics import (
    Trajectory,
    find_compatible_equilibrium,
    gibbs,
    proposition1_form,
    rate_vector,
    simulate,
    validate_convergence,
    write_trajectory_csv,
)
from crnbal.errors import (
    BoundaryApproachError,
    ConvergenceError,
    CRNError,
    NotFormallyBalancedError,
    NotReversibleError,
    OracleUnavailableError,
    ParseError,
    StructuralError,
)
from crnbal.graphkit import connected_components, cycle_space_basis, is_strongly_connected, spanning_trees_toward
from crnbal.kirchhoff import KirchhoffVector, kirchhoff_vector, rho_by_cofactor, rho_by_trees
from crnbal.model import (
    MatrixBundle,
    Reaction,
    ReactionNetwork,
    ReversibleStructure,
    Species,
    build_matrices,
    reversible_structure,
)
from crnbal.parser import load_network, parse_document, parse_network, serialize_network

__version__ = "0.1.0"
