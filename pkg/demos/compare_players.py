"""Head-to-head comparison of the four baseline players.

Run:  python3 demos/compare_players.py [--days D] [--out DIR]

Equivalent to `racewaybench compare` over the bundled player manifests:
runs each configuration on the same scenario, normalizes the loop cost
indices to player 1, and prints the comparison table.
"""

import argparse

from racewaybench import cli
from racewaybench import io as rio


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--days", type=float, default=6.0)
    parser.add_argument("--out", default="demo_compare")
    args = parser.parse_args()

    manifests = []
    for n in (1, 2, 3, 4):
        man = rio.read_manifest(rio.asset_dir() / f"player{n}.ini")
        man.days = args.days
        path = f"{args.out}_player{n}.ini"
        rio.write_manifest(man, path)
        manifests.append(path)

    code = cli.main(["compare", *manifests, "--out", args.out])
    raise SystemExit(code)


if __name__ == "__main__":
    main()
