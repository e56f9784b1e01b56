"""Entry point for ``python -m lentparticle``."""

import sys

from lentparticle.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
