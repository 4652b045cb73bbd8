#!/usr/bin/env python3
"""Convert the edges of a GML graph to the whitespace-separated edge-list
format read by `mincond`. Edge direction and attributes are discarded; the
solver drops duplicate edges and self-loops on load."""

import re
import sys

TOKEN = re.compile(r'"[^"]*"|\[|\]|[^\s\[\]]+')


def parse(text):
    stack = [[]]
    key = None
    for tok in TOKEN.findall(text):
        if tok == "[":
            stack.append([])
            stack[-2].append((key, stack[-1]))
            key = None
        elif tok == "]":
            stack.pop()
        elif key is None:
            key = tok
        else:
            stack[-1].append((key, tok))
            key = None
    return stack[0]


def edges(tree):
    graph = next(v for k, v in tree if k == "graph")
    for k, v in graph:
        if k == "edge":
            attrs = dict((a, b) for a, b in v if isinstance(b, str))
            yield attrs["source"], attrs["target"]


def main():
    if len(sys.argv) != 3:
        sys.exit("usage: gml_to_edgelist.py INPUT.gml OUTPUT.txt")
    with open(sys.argv[1], encoding="utf-8", errors="replace") as f:
        tree = parse(f.read())
    with open(sys.argv[2], "w", encoding="utf-8") as out:
        out.write(f"# converted from {sys.argv[1].rsplit('/', 1)[-1]}\n")
        for u, v in edges(tree):
            out.write(f"{u} {v}\n")


if __name__ == "__main__":
    main()
