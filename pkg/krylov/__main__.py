"""Entry point for python -m krylov."""
from .cli import main

if __name__ == "__main__":
    main()
