# run.py
import sys

from waveshape.cli import main

if __name__ == "__main__":
    sys.exit(main())
