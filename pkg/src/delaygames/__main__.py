import sys

from delaygames.cli import main

sys.exit(main())
