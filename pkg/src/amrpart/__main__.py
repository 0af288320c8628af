import sys

from amrpart.cli import main

sys.exit(main())
