import sys

from crnbal.cli import main

sys.exit(main())
