"""Regular certificates for almost-sure liveness of parameterised systems."""

from .automata import Alphabet, Dfa, Nfa
from .kernels import BACKEND
from .model import GameInstance, load_model, parse_model, validate
from .verify import AdviceBits, Counterexample, verify

__version__ = "0.1.0"

__all__ = ["Alphabet", "Dfa", "Nfa", "BACKEND", "GameInstance", "load_model", "parse_model",
           "validate", "AdviceBits", "Counterexample", "verify"]
