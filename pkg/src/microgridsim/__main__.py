"""Allow `python -m microgridsim ...`."""

from .cli import main

if __name__ == "__main__":
    main()
