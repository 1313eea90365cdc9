"""
The three tagger variants as one trainable model.

Variant A
    encoder -> dropout -> GAT stack over the dependency graph -> dropout ->
    ``[encoder || GAT layer l]`` -> BiLSTM -> dropout -> emission head -> CRF
Variant B
    ``[dropout(encoder) || frozen contextual embeddings]`` -> BiLSTM -> dropout -> emission head -> CRF
Variant C
    encoder -> dropout -> GAT stack over the lexicon graph -> dropout -> emission head -> CRF
    (graph node classification, no BiLSTM)

All parameters live in one ``ParamStore``; ``forward`` returns the N x 9 emissions and a
``PipelineTrace`` that ``backward`` turns into a gradient dict keyed by parameter name.
"""

from dataclasses import asdict, dataclass, replace

import numpy as np

import graminspect._auxiliary as aux
import graminspect._auxiliary.warnings as aw
import graminspect.defaults as defaults
from graminspect.Layers import BiLstm, CrfLayer, Dense, Encoder, EncoderConfig, GatStack, Trace, Vocab
from graminspect.main.Corpus import NUM_LABELS, TagSequence, bio_to_spans
from graminspect.numerics import ParamStore, dropout_mask

logger = aux.default_logger()


@dataclass(frozen=True)
class ModelConfig:
    """
    The architecture of a tagger.

    Attributes
    ----------
    variant : str
        "A", "B" or "C".
    embedding_dim : int
        The encoder width.
    encoder_kind : str
        "embedding" or "transformer".
    encoder_layers, encoder_heads, encoder_ffn : int
        The transformer shape (ignored for "embedding").
    max_len : int
        The maximal encoder stream length.
    gat_dims, gat_heads : tuple
        Per-head output width and head count of every GAT layer (variants A and C).
    lstm_hidden : int
        The hidden size of each LSTM direction (variants A and B).
    frozen_dim : int
        The width of the frozen contextual embeddings (variant B).
    encoder_feed_layer : int
        The encoder layer whose output feeds the later stages (-1 = final).
    concat_gat_layer : int
        The 1-based GAT layer whose output is concatenated in variant A (-1 = final).
    init_scale : float
        The standard deviation of the weight initialisation.
    """

    variant: str = "A"
    embedding_dim: int = defaults.paper["embedding_dim"]
    encoder_kind: str = defaults.paper["encoder_kind"]
    encoder_layers: int = defaults.paper["encoder_layers"]
    encoder_heads: int = defaults.paper["encoder_heads"]
    encoder_ffn: int = defaults.paper["encoder_ffn"]
    max_len: int = defaults.paper["max_len"]
    gat_dims: tuple = defaults.paper["gat_dims"]
    gat_heads: tuple = defaults.paper["gat_heads"]
    lstm_hidden: int = defaults.paper["lstm_hidden"]
    frozen_dim: int = 0
    encoder_feed_layer: int = -1
    concat_gat_layer: int = -1
    init_scale: float = defaults.init_scale

    def __post_init__(self):
        object.__setattr__(self, "gat_dims", tuple(int(i) for i in self.gat_dims))
        object.__setattr__(self, "gat_heads", tuple(int(i) for i in self.gat_heads))
        if self.variant not in defaults.variants:
            e = aw.TaggerError("unknown_variant", variant=self.variant, allowed=defaults.variants)
            logger.error(e)
            raise e
        if self.variant in ("A", "C"):
            if not self.gat_dims or len(self.gat_dims) != len(self.gat_heads):
                e = aw.TaggerError("bad_config", reason="gat_dims and gat_heads must be non-empty and of equal length")
                logger.error(e)
                raise e
            n = len(self.gat_dims)
            if not (1 <= self.concat_gat_layer <= n or -n <= self.concat_gat_layer <= -1):
                e = aw.TaggerError("bad_layer", index=self.concat_gat_layer, n=n, what="GAT")
                logger.error(e)
                raise e
        if self.variant == "B" and self.frozen_dim < 1:
            e = aw.TaggerError("bad_config", reason="variant B needs frozen_dim >= 1")
            logger.error(e)
            raise e

    @classmethod
    def from_profile(cls, profile: str = defaults.default_profile, variant: str = "A", **overrides):
        """
        Builds a config from a named hyperparameter profile ("paper" or "toy").
        """
        p = defaults.profiles[profile]
        keys = ("embedding_dim", "max_len", "gat_dims", "gat_heads", "lstm_hidden")
        values = {k: p[k] for k in keys}
        values.update(encoder_kind=p["encoder_kind"], encoder_layers=p["encoder_layers"], encoder_heads=p["encoder_heads"], encoder_ffn=p["encoder_ffn"])
        values.update(overrides)
        return cls(variant=variant, **values)

    def encoder_config(self, vocab_size: int):
        return EncoderConfig(
            vocab_size=vocab_size,
            embedding_dim=self.embedding_dim,
            kind=self.encoder_kind,
            layers=self.encoder_layers,
            heads=self.encoder_heads,
            ffn=self.encoder_ffn,
            max_len=self.max_len,
        )

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        d = asdict(self)
        d["gat_dims"] = list(self.gat_dims)
        d["gat_heads"] = list(self.gat_heads)
        return d

    @classmethod
    def from_dict(cls, d: dict):
        return cls(**d)


@dataclass(frozen=True)
class TrainConfig:
    """
    The training schedule.

    Attributes
    ----------
    batch_size : int
    lr : float
        The Adam learning rate.
    epochs : int
    dropout : float
        The inverted-dropout rate. By default the variant default
        (``defaults.variant_dropout``) or the profile rate.
    seed : int
        Fixes initialisation, shuffling and dropout.
    objective : str
        The evaluation level used for validation-driven model selection.
    """

    batch_size: int = defaults.paper["batch_size"]
    lr: float = defaults.paper["lr"]
    epochs: int = defaults.paper["epochs"]
    dropout: float = None
    seed: int = defaults.seed
    objective: str = defaults.default_objective

    def __post_init__(self):
        if self.objective not in defaults.objectives:
            e = aw.TaggerError("unknown_objective", objective=self.objective, allowed=defaults.objectives)
            logger.error(e)
            raise e
        if self.batch_size < 1 or self.epochs < 0 or self.lr < 0:
            e = aw.TaggerError("bad_config", reason="batch_size must be >= 1, epochs and lr >= 0")
            logger.error(e)
            raise e

    @classmethod
    def from_profile(cls, profile: str = defaults.default_profile, **overrides):
        p = defaults.profiles[profile]
        values = dict(batch_size=p["batch_size"], lr=p["lr"], epochs=p["epochs"], dropout=p["dropout"])
        values.update(overrides)
        return cls(**values)

    def dropout_for(self, variant: str):
        """
        Returns the dropout rate that applies to a variant.
        """
        if self.dropout is not None:
            return self.dropout
        return defaults.variant_dropout.get(variant, defaults.paper["dropout"])

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return asdict(self)


class PipelineTrace(Trace):
    """
    The cached forward pass of a tagger: encoder outputs, GAT outputs per layer,
    the concatenated BiLSTM input, BiLSTM states and the emissions.
    """


def fingerprint(config: ModelConfig, vocab: Vocab):
    """
    Returns the sha256 fingerprint of a model configuration and its vocabulary.
    """
    payload = {"model": config.to_dict(), "vocab": vocab.to_list()}
    return aux.checksum(aux.canonical_json(payload).encode(defaults.encoding))


class Tagger:
    """
    A character tagger of one variant.

    Parameters
    ----------
    config : ModelConfig
        The architecture.
    vocab : Vocab
        The character vocabulary.
    store : ParamStore
        Existing parameters (e.g. from a checkpoint). If None, call ``init``.
    """

    __slots__ = ["config", "vocab", "store", "encoder", "gat", "lstm", "head", "crf"]

    def __init__(self, config: ModelConfig, vocab: Vocab, store: ParamStore = None):
        self.config = config
        self.vocab = vocab
        self.store = ParamStore() if store is None else store

        self.encoder = Encoder(config.encoder_config(len(vocab)), prefix="enc")
        width = config.embedding_dim
        self.gat, self.lstm = None, None

        if config.variant in ("A", "C"):
            self.gat = GatStack(width, config.gat_dims, config.gat_heads, prefix="gat")
        if config.variant == "A":
            self.lstm = BiLstm("lstm", width + self.gat.widths()[self._concat_index() - 1], config.lstm_hidden)
        elif config.variant == "B":
            self.lstm = BiLstm("lstm", width + config.frozen_dim, config.lstm_hidden)

        head_in = self.lstm.width if self.lstm is not None else self.gat.widths()[-1]
        self.head = Dense("head", head_in, NUM_LABELS)
        self.crf = CrfLayer("crf", NUM_LABELS)

    @property
    def variant(self):
        return self.config.variant

    def fingerprint(self):
        return fingerprint(self.config, self.vocab)

    def layers(self):
        """
        Returns all layers in forward order.
        """
        layers = [self.encoder]
        if self.gat is not None:
            layers.extend(self.gat.layers)
        if self.lstm is not None:
            layers.append(self.lstm)
        return layers + [self.head, self.crf]

    def param_names(self):
        return [name for layer in self.layers() for name in layer.param_names()]

    def init(self, rng):
        """
        Draws fresh parameters.

        The BiLSTM input columns that read the frozen embeddings (variant B) start at zero,
        so at initialisation the frozen pathway contributes nothing.
        """
        scale = self.config.init_scale
        self.encoder.init(self.store, rng, scale)
        if self.gat is not None:
            self.gat.init(self.store, rng, scale)
        if self.lstm is not None:
            self.lstm.init(self.store, rng, scale)
            if self.variant == "B":
                for direction in ("fw", "bw"):
                    self.store[self.lstm.name(f"{direction}.W")][:, self.config.embedding_dim :] = 0.0
        self.head.init(self.store, rng, scale)
        self.crf.init(self.store, rng, scale)
        return self

    def _feed_index(self):
        depth = self.encoder.config.depth
        idx = self.config.encoder_feed_layer
        idx = depth + 1 + idx if idx < 0 else idx
        if not 0 <= idx <= depth:
            e = aw.TaggerError("bad_layer", index=self.config.encoder_feed_layer, n=depth + 1, what="encoder")
            logger.error(e)
            raise e
        return idx

    def _concat_index(self):
        n = len(self.config.gat_dims)
        idx = self.config.concat_gat_layer
        return n + 1 + idx if idx < 0 else idx

    def _check_inputs(self, sentence, graph, frozen):
        if self.variant in ("A", "C") and graph is None:
            what = "a dependency graph" if self.variant == "A" else "a lexicon graph"
            e = aw.TaggerError("missing_input", variant=self.variant, what=what, sid=sentence.id)
            logger.error(e)
            raise e
        if self.variant == "B" and frozen is None:
            e = aw.TaggerError("missing_input", variant=self.variant, what="frozen embeddings", sid=sentence.id)
            logger.error(e)
            raise e

    def forward(self, sentence, graph=None, frozen=None, rng=None, dropout: float = 0.0):
        """
        Computes the emissions of one sentence.

        Parameters
        ----------
        sentence : Sentence
        graph : CharGraph
            The dependency graph (variant A) or lexicon graph (variant C).
        frozen : np.ndarray
            The N x frozen_dim frozen embeddings (variant B).
        rng : np.random.Generator
            Draws the dropout masks. Without a generator (or with rate 0) no dropout is applied.
        dropout : float
            The inverted-dropout rate.

        Returns
        -------
        emissions : np.ndarray
            N x 9.
        trace : PipelineTrace
        """
        self._check_inputs(sentence, graph, frozen)
        store = self.store
        n = sentence.n

        def mask(width):
            if rng is None or dropout == 0:
                return None
            return dropout_mask(rng, (n, width), dropout)

        def apply(x, m):
            return x if m is None else x * m

        enc_outputs, enc_trace = self.encoder.forward(store, self.vocab.encode(sentence.chars))
        feed = self._feed_index()
        m_enc = mask(self.config.embedding_dim)
        features = apply(enc_outputs[feed], m_enc)

        trace = PipelineTrace(
            version=store.version, n=n, enc_outputs=enc_outputs, enc_trace=enc_trace, feed=feed, m_enc=m_enc, features=features
        )

        if self.variant in ("A", "C"):
            gat_masks = [mask(w) for w in self.gat.widths()]
            gat_outputs, gat_traces = self.gat.forward(store, features, graph, gat_masks)
            trace.gat_outputs, trace.gat_traces, trace.gat_masks = gat_outputs, gat_traces, gat_masks

        if self.variant == "A":
            l = self._concat_index()
            hand_off = apply(trace.gat_outputs[l - 1], trace.gat_masks[l - 1])
            concat = np.concatenate([features, hand_off], axis=1)
        elif self.variant == "B":
            frozen = np.asarray(frozen, dtype=np.float64)
            if frozen.shape != (n, self.config.frozen_dim):
                e = aw.LstmError("width_mismatch", width=frozen.shape[-1], expected=self.config.frozen_dim)
                logger.error(e)
                raise e
            concat = np.concatenate([features, frozen], axis=1)
        else:
            concat = None

        if self.lstm is not None:
            states, lstm_trace = self.lstm.forward(store, concat)
            m_lstm = mask(self.lstm.width)
            head_input = apply(states, m_lstm)
            trace.concat, trace.lstm_states, trace.lstm_trace, trace.m_lstm = concat, states, lstm_trace, m_lstm
        else:
            head_input = apply(trace.gat_outputs[-1], trace.gat_masks[-1])

        emissions, head_trace = self.head.forward(store, head_input)
        trace.head_input, trace.head_trace, trace.emissions = head_input, head_trace, emissions
        return emissions, trace

    def backward(self, trace: PipelineTrace, d_emissions, grads: dict = None):
        """
        Backpropagates a gradient with respect to the emissions through the whole pipeline.

        Parameters
        ----------
        trace : PipelineTrace
            The trace of the matching ``forward`` call.
        d_emissions : np.ndarray
            N x 9.
        grads : dict
            Gradients are accumulated into this dict (a new one is made if None).

        Returns
        -------
        dict
            parameter name -> gradient.
        """
        if trace.version != self.store.version:
            e = aw.TaggerError("stale_trace", trace_version=trace.version, version=self.store.version)
            logger.critical(e)
            raise e
        grads = {} if grads is None else grads
        store = self.store

        def apply(x, m):
            return x if m is None else x * m

        d_head_in = self.head.backward(store, trace.head_trace, d_emissions, grads)
        width = self.config.embedding_dim

        if self.lstm is not None:
            d_states = apply(d_head_in, trace.m_lstm)
            d_concat = self.lstm.backward(store, trace.lstm_trace, d_states, grads)
            d_features = d_concat[:, :width]
            if self.variant == "A":
                l = self._concat_index()
                d_gat = apply(d_concat[:, width:], trace.gat_masks[l - 1])
                d_features = d_features + self.gat.backward(store, trace.gat_traces, {l: d_gat}, grads, trace.gat_masks)
        else:
            n_gat = len(self.gat.layers)
            d_gat = apply(d_head_in, trace.gat_masks[-1])
            d_features = self.gat.backward(store, trace.gat_traces, {n_gat: d_gat}, grads, trace.gat_masks)

        d_feed = apply(d_features, trace.m_enc)
        self.encoder.backward(store, trace.enc_trace, {trace.feed: d_feed}, grads)
        return grads

    def loss(self, sentence, graph=None, frozen=None, rng=None, dropout: float = 0.0, grads: dict = None):
        """
        Returns the CRF negative log-likelihood of the sentence's gold tags.
        If `grads` is given, the parameter gradients are accumulated into it.
        """
        emissions, trace = self.forward(sentence, graph, frozen, rng=rng, dropout=dropout)
        loss, d_emissions = self.crf.nll(self.store, emissions, sentence.tags(), grads)
        if grads is not None:
            self.backward(trace, d_emissions, grads)
        return loss

    def decode(self, emissions):
        """
        Viterbi-decodes emissions into a ``TagSequence``.
        """
        return TagSequence.from_indices(self.crf.decode(self.store, emissions))

    def predict(self, sentence, graph=None, frozen=None):
        """
        Returns the predicted error spans of one sentence.
        """
        emissions, _ = self.forward(sentence, graph, frozen)
        return bio_to_spans(self.decode(emissions))

    def attention(self, sentence, graph, layer: int = 1, head: int = 0):
        """
        Returns the attention coefficients of one GAT head (variants A and C).

        Parameters
        ----------
        sentence : Sentence
        graph : CharGraph
        layer : int
            The GAT layer (1-based).
        head : int
            The head index (0-based).

        Returns
        -------
        np.ndarray
            N x N, rows sum to 1 over each neighbourhood.
        """
        if self.gat is None:
            e = aw.TaggerError("bad_layer", index=layer, n=0, what="GAT")
            logger.error(e)
            raise e
        if not 1 <= layer <= len(self.gat.layers):
            e = aw.TaggerError("bad_layer", index=layer, n=len(self.gat.layers), what="GAT")
            logger.error(e)
            raise e
        _, trace = self.forward(sentence, graph)
        return trace.gat_traces[layer - 1].alpha[head]

    def __repr__(self):
        return f"Tagger(variant {self.variant}, {len(self.store)} tensors, {self.store.n_values()} values)"
