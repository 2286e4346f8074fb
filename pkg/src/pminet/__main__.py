"""Make package runnable with python -m pminet.

This module provides the entry point for running the package as a module
(python -m pminet) and for the installed console script (pminet).
"""

import sys

from pminet.cli import main

if __name__ == "__main__":
    sys.exit(main())
