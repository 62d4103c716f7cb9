"""
Entry point: ``python main.py <subcommand> ...`` behaves like ``ggt``.

Serve the HTTP API with ``uvicorn app.main:app``.
"""

import sys

from ggt.cli import main

if __name__ == "__main__":
    sys.exit(main())
