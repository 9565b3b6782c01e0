"""Finite stratified categories, their décollages and constructible sheaves of finite sets."""

__version__ = "0.1.0"

from .category import FinCat, Functor, are_equivalent, classify_fibration, comma
from .decollage import Decollage, nerve, reassemble
from .errors import (CapExceeded, ExodromyError, NotASieve, ParseError, UnsupportedKind,
                     ValidationError)
from .galois import CurveSpec, build_curve_level, build_dvr, build_two_stratum, curve_presentation
from .groups import FinGroup, GroupHom
from .homology import GroupPresentation, homology_groups, nerve_complex, presentation_h1
from .layered import LayeredCat, PresCat, coarsen, h0, link, stratum
from .poset import FiniteSpace, FinPoset, MonotoneMap, PosetTower, alexandroff, subdivision
from .sheaf import SetFunctor, exodromy_check, right_kan_extension
