import sys

from stripsym.cli import main

sys.exit(main())
