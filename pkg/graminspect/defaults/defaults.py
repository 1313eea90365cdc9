"""
Stores basic default settings
"""

import logging


#  =================================================================
#                       Default FileIO settings
#  =================================================================

encoding = "utf-8"
"""The encoding of every text file graminspect reads or writes"""

correct_token = "correct"
"""The token marking an error-free sentence in prediction files"""

checkpoint_magic = "GRAMINSPECT-CKPT-1"
"""The first line of every checkpoint file (also acts as the format version)"""

frozen_magic = "GRAMINSPECT-FROZEN-1"
"""The first line of every frozen-embedding file"""

payload_dtype = "<f8"
"""The dtype of all binary payloads (little-endian double precision)"""

runlog_suffix = ".runlog.json"
"""The suffix of the sidecar run logs written next to every artifact"""

#  =================================================================
#                       Default Label settings
#  =================================================================

error_types = ("R", "M", "S", "W")
"""The four error categories in their fixed order (redundant, missing, selection, word order)"""

outside_label = "O"
"""The label of characters outside any error span"""

#  =================================================================
#                       Default core settings
#  =================================================================

seed = 11299114
"""default seed for randomised processes"""

strict_id = False
"""Set to True if object ids may strictly only be set once!"""

log_level = logging.WARNING
"""The default logging level"""

log_format = "%(asctime)s  |  %(levelname)s  |  %(module)s.%(funcName)s (%(lineno)d)  |  %(message)s"
"""The default logging format"""

init_log_loc = "stdout"
"""The default logging location."""

init_log_format = "%(levelname)s  |  %(module)s.%(funcName)s  |  %(message)s"
"""The default initial logging format that is used if aux.log() has not been called yet"""

version = "1.0.0"
"""The tool version recorded in run logs"""

#  =================================================================
#                       Default numerics settings
#  =================================================================

leaky_slope = 0.2
"""The LeakyReLU slope inside the attention logits"""

elu_alpha = 1.0
"""The ELU scale for negative inputs"""

adam_betas = (0.9, 0.999)
"""Adam moment decay rates"""

adam_eps = 1e-8
"""Adam denominator fuzz"""

gradcheck_step = 1e-5
"""The central-difference step for gradient checks"""

gradcheck_tol = 1e-4
"""The maximal relative error a gradient check may report and still pass"""

gradcheck_floor = 1e-5
"""Denominator floor of the relative error (keeps near-zero gradients comparable)"""

#  =================================================================
#                       Default paper hyperparameters
#  =================================================================

paper = dict(
    batch_size=32,
    lr=2e-5,
    epochs=120,
    dropout=0.1,
    embedding_dim=1024,
    encoder_kind="embedding",
    encoder_layers=0,
    encoder_heads=16,
    encoder_ffn=4096,
    max_len=128,
    gat_dims=(512, 1024),
    gat_heads=(8, 8),
    lstm_hidden=2048,
)
"""
Hyperparameters as reported for the full-scale system.
The pretrained encoder they assume (1024 hidden units, 16 heads, 24 layers)
is not part of this package, so the encoder defaults to trainable embeddings.
"""

toy = dict(
    batch_size=8,
    lr=1e-3,
    epochs=60,
    dropout=0.1,
    embedding_dim=32,
    encoder_kind="embedding",
    encoder_layers=0,
    encoder_heads=2,
    encoder_ffn=64,
    max_len=128,
    gat_dims=(16, 16),
    gat_heads=(2, 2),
    lstm_hidden=32,
)
"""Desk-scale profile used by the acceptance harness"""

profiles = {"paper": paper, "toy": toy}
"""All named hyperparameter profiles"""

default_profile = "paper"
"""The profile applied when none is requested"""

variants = ("A", "B", "C")
"""
The model variants:
A = encoder -> GAT over dependency graph -> concat -> BiLSTM -> CRF,
B = encoder + frozen contextual embeddings -> BiLSTM -> CRF,
C = encoder -> GAT over lexicon graph -> CRF (node classification).
"""

variant_dropout = {"C": 0.1}
"""Variant specific dropout rates that apply unless a rate is set explicitly"""

objectives = ("detection", "identification", "position")
"""The evaluation levels usable as selection / tuning objectives"""

default_objective = "identification"
"""The level optimised by default during model selection and threshold tuning"""

init_scale = 0.1
"""Standard deviation of the normal initialisation of weight matrices"""

farm_sizes = {"A": 12, "B": 10, "C": 45}
"""Seed-varied model counts of the full-scale ensemble"""

toy_farm_size = 5
"""Seed-varied model count of desk-scale farms"""

#  =================================================================
#                       Default ensemble settings
#  =================================================================

thetas = (0.5, 0.5, 0.5)
"""The default (theta1, theta2, theta3) vote fractions"""

tie_break = "width"
"""
How stage one picks the largest span of a type:
"width" = widest first, then most votes, then smaller start;
"votes" = most votes first, then widest, then smaller start.
"""

theta_grid = (0.05, 0.95, 0.05)
"""start, stop (inclusive) and step of the default threshold grid"""

#  =================================================================
#                       Default evaluation settings
#  =================================================================

level_names = {"detection": "Detection", "identification": "Identification", "position": "Position"}
"""Display names of the evaluation levels"""

report_digits = 4
"""Decimals shown in human-readable reports"""

#  =================================================================
#                       Default CLI settings
#  =================================================================

exit_codes = dict(ok=0, failure=1, usage=2, input=3, numeric=4, integrity=5)
"""The exit status of each error family"""

#  =================================================================
#                       Default Figure settings
#  =================================================================

default_palette = "mako_r"
"""The default palette for (static) plotting"""

default_style = "white"
"""The default style for (static) plotting"""

static_TrainingCurve = dict(
    title="Training History",
    xlabel="Epoch",
    linewidth=1.2,
    frame=False,
)

static_ThresholdHeatmap = dict(
    title="Threshold Tuning",
    xlabel="theta2",
    ylabel="theta1",
    cmap=default_palette,
    cbar_kws={"label": "F1"},
)

static_AttentionHeatmap = dict(
    title="Attention Coefficients",
    xlabel="",
    ylabel="",
    cmap=default_palette,
    cbar_kws={"label": "alpha"},
)
