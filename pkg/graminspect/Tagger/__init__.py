"""
The trainable taggers (variants A, B and C), their training loop and checkpoints.
"""

from .Tagger import ModelConfig, TrainConfig, Tagger, PipelineTrace, fingerprint
from .Frozen import FrozenEmbeddingTable
from .Checkpoint import Checkpoint, save_checkpoint, load_checkpoint
from .Trainer import Trainer, predict_corpus
from .func_api import model_forward, train, predict
