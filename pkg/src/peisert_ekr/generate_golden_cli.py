"""Script to regenerate the census golden tables."""

import argparse
import os
import sys

from . import classify
from .errors import PeisertError

GOLDEN_Q = [4, 5, 7, 8, 9, 11, 13, 16]


def main() -> None:
    """Generate every census table and save it to the golden directory."""
    parser = argparse.ArgumentParser(description="Regenerate census golden tables")
    parser.add_argument("--output-dir", default=os.path.join("tests", "golden"))
    parser.add_argument("--q", type=int, action="append", help="Only these q")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    os.makedirs(args.output_dir, exist_ok=True)
    for q in args.q or GOLDEN_Q:
        output_path = os.path.join(args.output_dir, f"census_q{q}.txt")
        try:
            rows = classify.census(q, max_q=max(GOLDEN_Q), workers=args.workers)
            if not all(row.complete for row in rows):
                raise PeisertError(f"census for q={q} hit a budget")
            with open(output_path, "w") as f:
                f.write(classify.format_census_table(q, rows))
            print(f"Exported q={q} to {output_path}")
        except PeisertError as e:
            print(f"Error exporting q={q}: {e}", file=sys.stderr)
            sys.exit(1)

    print(f"\nAll census tables generated in '{args.output_dir}'")


if __name__ == "__main__":
    main()
