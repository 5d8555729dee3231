import sys

from montee.cli import main

sys.exit(main())
