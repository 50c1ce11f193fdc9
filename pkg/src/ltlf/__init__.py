from src.ltlf.dfa import Dfa, minimize, to_dfa
from src.ltlf.formula import Formula, atoms
from src.ltlf.parser import parse
from src.ltlf.semantics import evaluate, final_eval, progress
from src.ltlf.symbolic import SymbolicDfa, encode_symbolic

__all__ = [
    "Dfa",
    "Formula",
    "SymbolicDfa",
    "atoms",
    "encode_symbolic",
    "evaluate",
    "final_eval",
    "minimize",
    "parse",
    "progress",
    "to_dfa",
]
