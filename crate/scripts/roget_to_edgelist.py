#!/usr/bin/env python3
"""Convert the Roget thesaurus cross-reference file (roget_dat.txt[.gz], as
shipped with the networkx 2.x examples) to an undirected edge list of
category numbers."""

import gzip
import re
import sys

HEAD = re.compile(r"^(\d+)[^:]*:(.*)$")


def records(lines):
    pending = ""
    for line in lines:
        if line.startswith("*"):
            continue
        line = line.rstrip("\n")
        if line.endswith("\\"):
            pending += line[:-1]
            continue
        yield pending + line
        pending = ""


def main():
    if len(sys.argv) != 3:
        sys.exit("usage: roget_to_edgelist.py roget_dat.txt[.gz] OUTPUT.txt")
    src = sys.argv[1]
    opener = gzip.open if src.endswith(".gz") else open
    with opener(src, "rt", encoding="latin-1") as f, open(sys.argv[2], "w") as out:
        out.write("# Roget's Thesaurus cross references (Stanford GraphBase roget.dat)\n")
        for rec in records(f):
            m = HEAD.match(rec)
            if not m:
                continue
            for target in m.group(2).split():
                out.write(f"{m.group(1)} {target}\n")


if __name__ == "__main__":
    main()
