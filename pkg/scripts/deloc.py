import sys
from pathlib import Path

sys.path.append(str(Path(__file__).resolve().parent.parent / "src"))

from cli import dispatch


def main():
    """Run one deloc subcommand, e.g. `python scripts/deloc.py hyperbolic torsion --n 1 --k 1 --l 1 --angles 0`"""
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
