"""Run the ccdbench command line"""
from .cli import main

raise SystemExit(main())
