import sys

from telecloning.cli import main

sys.exit(main())
