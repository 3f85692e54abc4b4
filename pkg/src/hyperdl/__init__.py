"""Finite Priestley/Birkhoff duality, hyperspace posets over finite spaces,
free modal lattice constructions, and the algebra/coalgebra dualities of
positive modal logic, all verified by exhaustive checks at small scale."""

from .posets import (OrderedFamily, Poset, em_quotient, enumerate_posets,
                     order_iso_find)
from .lattices import (DistLattice, DualSpace, LatticeHom, bool_extension,
                       clopen_upsets, downset_lattice, filters, ideals,
                       ideal_filter_flip, priestley_dual, unit_iso, upset_lattice)
from .hyperspaces import HyperFamily, box_of, diamond_of, hyper_family
from .free_modal import (GeneratedLattice, ModalRealization, Term, box_lattice,
                         concrete_modal_lattice, diamond_lattice, parse_term,
                         term_equal, term_eval, weakly_prime_pairs)
from .modal import ModalAlgebra, ModalSpace, algebra_to_space, space_to_algebra
from .fell import FCSet, nonconvex_limit_report, verify_closure_claim
from .reports import Report

__all__ = [
    "OrderedFamily", "Poset", "em_quotient", "enumerate_posets", "order_iso_find",
    "DistLattice", "DualSpace", "LatticeHom", "bool_extension", "downset_lattice",
    "filters", "ideals", "ideal_filter_flip", "priestley_dual", "unit_iso",
    "upset_lattice", "clopen_upsets",
    "HyperFamily", "box_of", "diamond_of", "hyper_family",
    "GeneratedLattice", "ModalRealization", "Term", "box_lattice",
    "concrete_modal_lattice", "diamond_lattice", "parse_term", "term_equal",
    "term_eval", "weakly_prime_pairs",
    "ModalAlgebra", "ModalSpace", "algebra_to_space", "space_to_algebra",
    "FCSet", "nonconvex_limit_report", "verify_closure_claim",
    "Report",
]
