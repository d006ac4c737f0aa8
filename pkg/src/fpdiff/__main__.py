import sys

from fpdiff.cli import main

sys.exit(main())
