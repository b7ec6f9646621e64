"""Delta lenses, symmetric lenses and spans of lenses over finite categories."""

from .category import FinCat, Functor, boff_factorize, classify_functor, from_arrows, pullback
from .errors import DeltaLensError
from .lenses import Cofunctor, Lens, MealyMorphism
from .homcats import LensSpan, SymmetricLens
from .pushout import PresentedCategory, pushout_ioo

__version__ = "0.1.0"

__all__ = [
    "Cofunctor",
    "DeltaLensError",
    "FinCat",
    "Functor",
    "Lens",
    "LensSpan",
    "MealyMorphism",
    "PresentedCategory",
    "SymmetricLens",
    "boff_factorize",
    "classify_functor",
    "from_arrows",
    "pullback",
    "pushout_ioo",
]
