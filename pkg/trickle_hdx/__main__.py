"""Main module for Trickle HDX.

This module allows the CLI to be run as a Python module using:
python -m trickle_hdx

It delegates to the CLI's main function.
"""

from trickle_hdx.cli import main

if __name__ == "__main__":
    main()
