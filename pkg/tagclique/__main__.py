import sys

from tagclique.cli import main

sys.exit(main())
