import os
import sys
# the modules live next to this file
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import run


if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))
