import sys

from wenoadj.cli import main

sys.exit(main())
