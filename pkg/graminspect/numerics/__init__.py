"""
Double-precision numerics: stable reductions, activations, seeded generators,
the Adam optimizer, the parameter store and the finite-difference gradient oracle.
"""

from .numerics import *
from .ParamStore import ParamStore
from .Adam import Adam, AdamState, adam_step
from .GradCheck import GradCheckReport, finite_diff_check, relative_error
