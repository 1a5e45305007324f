"""Rebuild tests/fixtures/layout/oracle.json from solc's storage-layout output.

Needs a ``solc`` binary (0.5.16 or later with ``--combined-json storage-layout``)
on the PATH. The checked-in oracle was written by hand and matches what solc
reports for the fixture contracts.
"""
import argparse
import json
import logging
import os
import subprocess
import sys

LAYOUT_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures", "layout")

logger = logging.getLogger(__name__)


def solc_layout(path, solc="solc"):
    """Run solc on one file and reduce its output to label/slot/offset triples"""
    try:
        result = subprocess.run(
            [solc, "--combined-json", "storage-layout", path],
            check=True,
            capture_output=True,
            text=True,
        )
    except (OSError, subprocess.CalledProcessError) as e:
        logger.error(f"solc failed on {path}: {str(e)}")
        raise RuntimeError(f"Could not compile {path}: {str(e)}")

    contracts = json.loads(result.stdout)["contracts"]
    reduced = {}
    for key, value in contracts.items():
        name = key.rsplit(":", 1)[-1]
        layout = value["storage-layout"]
        if isinstance(layout, str):
            layout = json.loads(layout)
        reduced[name] = [
            {"label": entry["label"], "slot": entry["slot"], "offset": entry["offset"]}
            for entry in layout["storage"]
        ]
    return reduced


def main():
    parser = argparse.ArgumentParser(description="Regenerate the storage layout oracle with solc")
    parser.add_argument("--solc", default="solc", help="solc executable")
    parser.add_argument("--dir", default=LAYOUT_DIR, help="directory holding the .sol fixtures")
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')

    oracle = {}
    for filename in sorted(os.listdir(args.dir)):
        if filename.endswith(".sol"):
            logger.info(f"Compiling {filename}")
            oracle[filename] = solc_layout(os.path.join(args.dir, filename), args.solc)

    target = os.path.join(args.dir, "oracle.json")
    with open(target, "w", encoding="utf-8") as f:
        json.dump(oracle, f, indent=2)
        f.write("\n")
    logger.info(f"Wrote {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
