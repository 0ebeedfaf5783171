import sys

from galg.cli import main

sys.exit(main())
