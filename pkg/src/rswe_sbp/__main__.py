import sys

from rswe_sbp.cli import main

sys.exit(main())
