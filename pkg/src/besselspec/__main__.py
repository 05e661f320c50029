"""Entry point for command-line interface."""

from besselspec.cli.commands import main

if __name__ == "__main__":
    main()
