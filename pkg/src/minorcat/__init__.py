"""Graph minor category, quartet orders, and configuration-space homology via the reduced Świątkowski complex."""
from .graphs import (Graph, DirectedGraph, OrderedDirectedGraph, Edge, underlying, is_connected,
                     is_forest, is_tree, genus, canonical_form, is_isomorphic,
                     enumerate_connected_graphs, star, path, cycle, rose, complete,
                     complete_bipartite, lollipop, point, is_planar)
from .minors import (MinorMorphism, OrderedMinorMorphism, validate, compose, identity,
                     edge_injection, hom_set, automorphisms, has_minor, forget, od_hom_set)
from .homology import HomologyGroup, IntMatrix, snf, homology
from .swiatkowski import SwiatkowskiComplex, build, rank_formula, pullback, generator_search
from .abrams import abrams_oracle

__version__ = "0.1.0"
