"""
Readers (and writers) for every text file graminspect consumes or produces.
"""

from .Readers import *
