from .Corpus import (
    LABELS,
    LABEL_INDEX,
    NUM_LABELS,
    Corpus,
    ErrorSpan,
    ErrorType,
    PredictionSet,
    Sentence,
    TagSequence,
)
from .func_api import *
