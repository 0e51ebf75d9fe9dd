import sys

from slval.cli import main

sys.exit(main())
