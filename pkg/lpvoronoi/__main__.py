import sys

from lpvoronoi.cli import main

sys.exit(main())
