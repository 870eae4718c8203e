import sys

from temposum.cli import main

sys.exit(main())
