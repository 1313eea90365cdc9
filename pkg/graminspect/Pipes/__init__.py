"""
Pipelines that train and apply many models in one go (see ``Farm``).
"""

from .Pipes import Pipeline, Farm
