"""Write a two-qubit Werner state p|Phi+><Phi+| + (1-p) I/4 as a state file.

Usage: python -m sepkit.fixtures.werner_p P OUT.json
"""

import sys

from sepkit import matrixfile
from sepkit.states import werner_state


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 2:
        print(__doc__, file=sys.stderr)
        return 1
    state = werner_state(float(argv[0]))
    matrixfile.dump(argv[1], "state", 2, 2, state.rho)
    return 0


if __name__ == "__main__":
    sys.exit(main())
