import sys

from qplancherel.cli import main

sys.exit(main())
