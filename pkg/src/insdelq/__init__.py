"""Decoding one quantum insertion followed by one quantum deletion for residue-embedded qudit codes.

Modules: ``seqcore`` (classical words), ``editgraph`` (DP table and paths),
``checks`` (brute-force properties), ``qsim`` (ensemble simulator),
``basecode`` (base code and recovery), ``mhcode`` (embedded code),
``decoder`` (channel and decoder), ``harness`` (sweeps and reports).
"""

from .basecode import CodeIsometry, five_qudit_code
from .decoder import ChannelSpec, DecodeReport, apply_insdel, decode, decode_branches
from .editgraph import candidate_insertion_indices, edit_matrix, oracle_J, path_bot, path_top
from .mhcode import MHCode, mh_encode
from .qsim import Ensemble, PureState, fidelity
from .seqcore import monotone_periodic

__all__ = [
    "ChannelSpec", "CodeIsometry", "DecodeReport", "Ensemble", "MHCode", "PureState",
    "apply_insdel", "candidate_insertion_indices", "decode", "decode_branches", "edit_matrix",
    "fidelity", "five_qudit_code", "mh_encode", "monotone_periodic", "oracle_J", "path_bot", "path_top",
]
__version__ = "0.1.0"
