"""Poset associahedra, graph tubings, stack-sorting preimages and Dyck path bijections."""

from .bijections import (
    decompose_chain,
    decompose_core,
    f_nk,
    f_nk_inverse,
    g_nk,
    g_nk_inverse,
    main_theorem_check,
    verify_descent_preservation,
    verify_round_trip,
)
from .dyck import DyckPath, MarkedDyck, PairNK, catalan, catalan_conv, des_c, des_pair, mark
from .graph import BTree, Graph, btree_from_tubing, hpoly_btrees, line_graph_of_hasse, lollipop
from .polynomial import IntPolynomial, gamma_from_h, h_from_f, narayana, typeB_narayana
from .poset import Poset, build_poset, chain, antichain, ordinal_sum, make_A, enumerate_tubings, h_polynomial
from .stacksort import DecreasingBinaryTree, inorder_tree, preimage, stack_sort

__version__ = "0.1.0"
