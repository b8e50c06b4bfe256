import sys

from src.cli.command_line import main


if __name__ == '__main__':
    sys.exit(main())
