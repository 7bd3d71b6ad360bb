from .wavelets import (WaveletFilterPair, analysis_matrices, dwt_step, output_length, pool_step,
                       wavelet_filters)
from .selection import (SELECTION_MODES, FrequencySelector, SelectionResult, WaveletRoute, gumbel_softmax,
                        one_hot_argmax, select_frequency, straight_through)
from .local import LocalFusion, local_fusion
from .attention import AttentionBlock, MultiHeadSelfAttention, global_fusion, positional_encoding
from .pipeline import TemporalOutput, TemporalPipeline, temporal_pipeline
