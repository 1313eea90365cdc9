"""
This submodule contains the warning strings for the various classes in graminspect.
It also defines a SoftWarning (which only reports the warning string) and the
ClassError family of Exceptions that look their messages up in the same dictionary.
"""

import logging

# this dictionary stores all the warnings for graminspect
WARNINGS = {

"Corpus:span_out_of_range" : "Span ({start}, {end}, {type}) of sentence '{sid}' is out of range!\nOffsets must satisfy 1 <= start <= end <= {n}.",
"Corpus:bad_span" : "Span ({start}, {end}, {type}) is invalid: offsets must be integers with 1 <= start <= end.",
"Corpus:unknown_type" : "Unknown error type '{type}'! Allowed types are {allowed}.",
"Corpus:unknown_label" : "Unknown label '{label}'! Allowed labels are {allowed}.",
"Corpus:empty_sentence" : "Sentence '{sid}' contains no characters!",
"Corpus:type_overlap" : "Sentence '{sid}' has overlapping gold spans of the same type: {first} and {second}.",
"Corpus:bio_overlap" : "Spans {first} and {second} overlap and cannot be expressed by a single BIO sequence!",
"Corpus:duplicate_id" : "Sentence id '{sid}' occurs more than once!",
"Corpus:unknown_id" : "Sentence id '{sid}' is not part of the corpus!",
"Corpus:bad_fraction" : "A split fraction must lie strictly between 0 and 1 (got {fraction}).",
"Corpus:spans_dropped" : "Sentence '{sid}': {n} gold span(s) overlap others and were left out of the BIO encoding: {spans}",

"Reader:malformed_record" : "Line {line} of '{file}' could not be read: {reason}",
"Reader:bad_span" : "Line {line} of '{file}': {reason}",
"Reader:unknown_type" : "Line {line} of '{file}': unknown error type token '{token}'.",
"Reader:non_numeric" : "Line {line} of '{file}': non-numeric offset '{token}'.",
"Reader:bad_columns" : "Line {line} of '{file}' has {n} column(s); expected {expected}.",
"Reader:bad_magic" : "The file '{file}' is not a {kind} file (expected first line '{magic}').",
"Reader:truncated" : "The file '{file}' is truncated: {reason}",
"Reader:missing_row" : "No frozen embedding row is stored for sentence '{sid}'.",
"Reader:count_mismatch" : "The file '{file}' holds {found} record(s) but {expected} sentence(s) were given.",
"Reader:text_mismatch" : "Parse {index} of '{file}' does not reconstruct sentence '{sid}'.",

"Numerics:empty_vector" : "log_sum_exp requires a non-empty vector!",
"Numerics:empty_mask" : "masked_softmax requires at least one kept entry per row!",
"Numerics:non_finite" : "The function value is not finite at probe {name}[{index}] (value = {value}).",
"Numerics:shape_mismatch" : "Shape mismatch for '{name}': parameter {pshape} but gradient {gshape}.",
"Numerics:bad_slope" : "The LeakyReLU slope must lie in (0, 1) (got {slope}).",
"Numerics:bad_rate" : "A dropout rate must lie in [0, 1) (got {rate}).",
"Numerics:non_finite_loss" : "The loss became non-finite in epoch {epoch}, batch {batch} (value = {value}).",

"Graph:bad_root" : "A dependency parse needs exactly one root (head = 0); found {n}.",
"Graph:bad_head" : "Word {index} has head {head}, but heads must lie in [0, {n}].",
"Graph:offset_mismatch" : "The parse words '{words}' do not reconstruct the sentence '{text}'.",
"Graph:empty_word" : "A lexicon cannot contain the empty word!",
"Graph:empty_parse" : "A dependency parse needs at least one word!",
"Graph:bad_edge" : "Edge ({i}, {j}) leaves the node range [1, {n}].",

"Gat:dimension_mismatch" : "Feature width {width} does not match the layer's input width {expected}.",
"Gat:node_mismatch" : "The graph has {n_graph} nodes but {n_features} feature rows were given.",
"Gat:stale_trace" : "The trace stems from parameter version {trace_version}, but the parameters are at version {version}!",
"Gat:unknown_mode" : "Unknown GAT mode '{mode}'; use 'concat' or 'average'.",
"Gat:unknown_activation" : "Unknown activation '{activation}'; use 'elu' or 'identity'.",

"Crf:length_mismatch" : "The tag sequence has length {n_tags} but there are {n} emission rows.",
"Crf:bad_transitions" : "The transition matrix must have shape ({k2}, {k2}) for {k} labels (got {shape}).",
"Crf:empty" : "The CRF needs at least one emission row.",

"Lstm:width_mismatch" : "Feature width {width} does not match the LSTM input width {expected}.",
"Lstm:stale_trace" : "The trace stems from parameter version {trace_version}, but the parameters are at version {version}!",

"Encoder:unknown_kind" : "Unknown encoder kind '{kind}'; use 'embedding' or 'transformer'.",
"Encoder:bad_heads" : "The model width {width} is not divisible by {heads} attention heads.",
"Encoder:stale_trace" : "The trace stems from parameter version {trace_version}, but the parameters are at version {version}!",

"Tagger:unknown_variant" : "Unknown variant '{variant}'; allowed variants are {allowed}.",
"Tagger:missing_input" : "Variant {variant} requires {what} for sentence '{sid}'.",
"Tagger:fingerprint_mismatch" : "The checkpoint was made for a different configuration!\nCheckpoint: {expected}\nRequested: {got}",
"Tagger:empty_corpus" : "Training requires at least one sentence!",
"Tagger:bad_config" : "Invalid model configuration: {reason}",
"Tagger:bad_layer" : "Layer index {index} is out of range for {n} {what} layer(s).",
"Tagger:stale_trace" : "The trace stems from parameter version {trace_version}, but the parameters are at version {version}!",
"Tagger:unknown_objective" : "Unknown objective '{objective}'; use one of {allowed}.",

"Checkpoint:bad_magic" : "The file '{file}' is not a checkpoint or has an unsupported version (first line '{found}', expected '{expected}').",
"Checkpoint:truncated" : "The checkpoint '{file}' is truncated: {reason}",
"Checkpoint:checksum" : "Checksum mismatch for tensor '{name}' in '{file}'! The file is corrupted.",
"Checkpoint:fingerprint" : "The checkpoint '{file}' has fingerprint {found}, but {expected} was required.",

"Ensemble:no_models" : "The ensemble needs at least one non-LGN model!",
"Ensemble:bad_theta" : "Threshold {name} = {value} must lie in [0, 1].",
"Ensemble:unknown_tie_break" : "Unknown tie-break policy '{policy}'; use one of {allowed}.",
"Ensemble:empty_grid" : "The threshold grid is empty!",
"Ensemble:unknown_objective" : "Unknown objective '{objective}'; use one of {allowed}.",

"Evaluator:unknown_id" : "The predictions contain sentence '{sid}' that is not part of the gold corpus!",
"Evaluator:out_of_range" : "Precision and recall must lie in [0, 1] (got precision = {precision}, recall = {recall}).",

"Config:unknown_key" : "Unknown configuration key '{key}' (line {line})!",
"Config:type_mismatch" : "Configuration key '{key}' expects {expected} but got '{value}'.",
"Config:missing_path" : "The command '{command}' requires '{key}' to be set.",
"Config:bad_line" : "Line {line} of the config file is not of the form 'key = value': {text}",

"Pipe:no_data" : "The pipeline requires a training corpus! Make sure to provide one using link().",
"Pipe:no_models" : "No models have been trained yet, run() the pipeline first.",

"Plotter:unknown_data" : "Unknown data linkage!\nReceived: {obj}",
"Plotter:no_fig_yet" : "No figure has been generated yet, nothing to save...",

"blank" : "{msg}",

}


class SoftWarning:
    """
    Only reports the warning string through the graminspect logger.
    It takes the warning identifier alongside with any formatted input that the warning may display
    """

    def __init__(self, warning, **kwargs):
        self._message = WARNINGS[warning]
        self._was_raised = False
        self._once_only = kwargs.pop("once", False)
        if not self._once_only:
            self.trigger(**kwargs)

    def trigger(self, **kwargs):
        should_not_raise = self._once_only and self._was_raised
        if not should_not_raise:
            self._message = self._message.format(**kwargs)
            self._was_raised = True
            logging.getLogger("graminspect").warning(self._message)


def warning(key):
    """
    Returns the the warning message for a given key.
    """
    return WARNINGS.get(key, None)


class ClassError(ValueError):
    """
    A generic Meta-Error for the specific classes of graminspect
    """

    def __init__(self, warning, **attrs):
        self.msg = warning
        self.attr = attrs
        self.name = type(self).__name__
        self.key = self.name.replace("Error", "")
        super().__init__(warning)

    def __reduce__(self):
        return (_rebuild_error, (type(self), self.msg, self.attr))

    def __str__(self):
        s = f"{self.key}:{self.msg}"
        s = WARNINGS[s].format(**self.attr)
        s = f"[{self.name}] {s}"
        return s

    def __repr__(self):
        return self.__str__()


def _rebuild_error(cls, msg, attr):
    # errors raised inside farm worker processes travel back pickled
    return cls(msg, **attr)


class CorpusError(ClassError):
    pass


class ReaderError(ClassError):
    pass


class NumericsError(ClassError):
    pass


class GraphError(ClassError):
    pass


class GatError(ClassError):
    pass


class CrfError(ClassError):
    pass


class LstmError(ClassError):
    pass


class EncoderError(ClassError):
    pass


class TaggerError(ClassError):
    pass


class CheckpointError(ClassError):
    pass


class EnsembleError(ClassError):
    pass


class EvaluatorError(ClassError):
    pass


class ConfigError(ClassError):
    pass


class PipeError(ClassError):
    pass


class PlotterError(ClassError):
    pass
