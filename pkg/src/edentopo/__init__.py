"""Eden growth on Z^d with exact topological bookkeeping."""
from .growth import BondFPP, EdenUniform, Exponential, SiteFPP, Trajectory, reverse_process, simulate
from .holetrack import ComplementMap, barcode_dminus1, canonical_fixed, canonical_free
from .homology import PersistenceInterval, betti, build_filtration, persistence
from .lattice import GrowthState, Polyomino

__version__ = "0.1.0"
