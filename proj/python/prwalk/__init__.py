"""Random walks on generating tuples of F_2^n and Heisenberg groups."""

from ._prwalk import *  # noqa: F401,F403
from ._prwalk import PrwalkError, run_cli

__version__ = "0.1.0"


def cli_json(*args):
    """Run a CLI subcommand and parse its JSON envelope; raises PrwalkError on a nonzero exit."""
    import json

    code, out, err = run_cli([str(a) for a in args])
    if code != 0:
        raise PrwalkError(f"exit {code}: {err.strip()}")
    return json.loads(out)
