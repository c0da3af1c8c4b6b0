"""Spectra of coin-toss, affine and polynomial random walks on finite modules over finite commutative rings."""

from .modules import FiniteModule, build_cyclic_module, build_free_module, direct_sum
from .rings import FiniteRing, build_gf, build_product, build_zn
from .spec import ExperimentSpec, SpecError, parse_spec
from .spectrum import SpectrumItem, SpectrumReport, predicted_spectrum
from .verify import VerificationReport, stationary_distribution, verify_power_sums
from .walks import Affine, CoinToss, Distribution, Polynomial, WalkSpec, walk_matrix

__version__ = "0.1.0"
