"""Entry point for ``python -m rainbow_mantel``."""

import sys


def main() -> None:
    """Run the CLI and exit with its status code."""
    try:
        from rainbow_mantel.cli import run

        sys.exit(run())
    except ImportError as e:
        print(f"Error importing CLI: {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
