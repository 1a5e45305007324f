import io
import sys

from src.cli import run

if __name__ == "__main__":
    # Fix console encoding for Unicode support
    sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8', newline='\n')
    sys.exit(run(sys.argv[1:]))
