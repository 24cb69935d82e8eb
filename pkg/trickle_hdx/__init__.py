"""Spectral trickle-down analysis of weighted simplicial complexes"""

from loguru import logger

from trickle_hdx.complex import WeightedComplex, build_complex

# Library code stays silent until a run configures logging.
logger.disable("trickle_hdx")

__version__ = "0.1.0"
__author__ = "Trickle HDX Developers"

__all__ = ["WeightedComplex", "build_complex", "__version__"]
