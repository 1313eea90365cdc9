from .warnings import *
