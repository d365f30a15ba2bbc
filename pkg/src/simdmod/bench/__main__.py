import sys

from simdmod.bench.cli import main

sys.exit(main())
