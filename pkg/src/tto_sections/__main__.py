import sys

from tto_sections._cli import main

sys.exit(main())
