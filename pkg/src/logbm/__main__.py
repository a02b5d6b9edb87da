import sys

from logbm.cli import main

sys.exit(main())
