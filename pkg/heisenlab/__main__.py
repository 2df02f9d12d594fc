import sys

from heisenlab.cli import main

sys.exit(main())
