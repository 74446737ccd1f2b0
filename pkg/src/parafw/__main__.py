import sys

from parafw.cli import main

sys.exit(main())
