import sys

from footsim.main import main

sys.exit(main())
