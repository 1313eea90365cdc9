"""
The learned layers: affine heads, graph attention, the linear-chain CRF,
the bidirectional LSTM and the character encoder.
"""

from ._base import Layer, Trace
from .Dense import Dense
from .Gat import GatLayer, GatLayerParams, GatStack, gat_attention, gat_backward, gat_forward
from .Crf import CrfLayer, crf_log_partition, crf_marginals, crf_nll, crf_score, viterbi_decode
from .Lstm import BiLstm, BiLstmParams, bilstm_backward, bilstm_forward
from .Encoder import Encoder, EncoderConfig, Vocab
