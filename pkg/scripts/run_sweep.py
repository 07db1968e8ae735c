"""Run the published experiment grid and print one table per scenario.

    python3 scripts/run_sweep.py --out results --reps 30

Equivalent to ``sdwsn-cusum sweep``; extra flags are passed through.
"""

import sys
import time

from sdwsn_cusum.cli import main

if __name__ == "__main__":
    t0 = time.perf_counter()
    code = main(["sweep", *sys.argv[1:]])
    print(f"sweep finished in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    sys.exit(code)
