"""Regenerate the shipped template catalogs under src/clustervec/data/.

    python3 scripts/generate_catalogs.py            # everything except E8
    python3 scripts/generate_catalogs.py E7 E8      # selected types
"""
from __future__ import annotations

import argparse
import logging
import time

from clustervec.diagrams import DATA_DIR, SAMPLED_EXTRACTION, extract_templates, write_catalog
from clustervec.dynkin_types import parse_label, reference_matrix
from clustervec.enumeration import enumerate_matrix_class

DEFAULT_TYPES = ["B2", "B3", "B4", "B5", "C3", "C4", "C5", "D4", "D5", "D6", "G2", "F4", "E6", "E7"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("types", nargs="*", default=DEFAULT_TYPES)
    ap.add_argument("--members", type=int, default=None,
                    help="only use the first N class members (BFS order)")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    for name in args.types:
        z = parse_label(name).normalized()
        t0 = time.perf_counter()
        size = len(enumerate_matrix_class(reference_matrix(z)))
        limit = args.members if args.members is not None else SAMPLED_EXTRACTION.get(z)
        temps = extract_templates(z, max_members=limit)
        used = size if limit is None else min(limit, size)
        path = write_catalog(z, temps, DATA_DIR, used, size)
        logging.info("%s: %d templates from %d/%d members in %.1fs -> %s",
                     z, len(temps), used, size, time.perf_counter() - t0, path.name)


if __name__ == "__main__":
    main()
