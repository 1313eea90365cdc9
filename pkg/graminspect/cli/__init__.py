"""
The command line interface (``graminspect <command>`` or ``python -m graminspect``).
"""

from .Config import RunConfig, load_config, read_config
from .commands import main, dispatch, exit_code, write_runlog
