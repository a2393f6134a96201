import sys

from hybrid_eom.cli import main

sys.exit(main())
