from .adjacency import INTER, INTRA, EdgeMlp, build_dynamic_adjacency, edge_kind, edge_pairs
from .filters import DEGREE_EPS, adaptive_filter_layer, graph_filters, mixed_filter, propagation_matrix
from .block import GRAPH_MODES, GraphFusionOutput, ModalityNodeFusion, modality_node_fusion
from .spectrum import GraphSpectrum, ModalityGraph, gft_analyze
