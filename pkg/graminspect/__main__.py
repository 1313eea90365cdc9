import sys

from graminspect.cli import main

sys.exit(main())
