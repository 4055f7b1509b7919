import sys

from qjoin.cli import main

sys.exit(main())
