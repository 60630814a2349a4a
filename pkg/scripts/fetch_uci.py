#!/usr/bin/env python3
"""Download the UCI combined-cycle power plant dataset and convert it to CSV.

The UCI archive ships the data as an .xlsx workbook inside a .zip. This
script downloads the zip, extracts the first worksheet of the workbook
(9568 rows, features AT, V, AP, RH, target PE), and writes a plain CSV
that `rulemix benchmark` and the optional desk-scale test can read.

Usage:
    python3 scripts/fetch_uci.py                 # writes data/ccpp.csv
    python3 scripts/fetch_uci.py --out other.csv

Only the standard library is used; the workbook is parsed directly as
zipped XML, so no spreadsheet package is required.
"""

import argparse
import io
import re
import sys
import urllib.request
import xml.etree.ElementTree as ET
import zipfile
from pathlib import Path

CCPP_URL = "https://archive.ics.uci.edu/static/public/294/combined+cycle+power+plant.zip"


def _strip_ns(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _shared_strings(workbook: zipfile.ZipFile) -> list[str]:
    try:
        raw = workbook.read("xl/sharedStrings.xml")
    except KeyError:
        return []
    strings = []
    for node in ET.fromstring(raw).iter():
        if _strip_ns(node.tag) == "si":
            strings.append("".join(t.text or "" for t in node.iter() if _strip_ns(t.tag) == "t"))
    return strings


def read_worksheet(workbook: zipfile.ZipFile, sheet: str = "xl/worksheets/sheet1.xml") -> list[list[str]]:
    """Rows of the worksheet as strings, shared-string cells resolved."""
    strings = _shared_strings(workbook)
    rows = []
    for row_node in ET.fromstring(workbook.read(sheet)).iter():
        if _strip_ns(row_node.tag) != "row":
            continue
        cells = []
        for cell in row_node:
            if _strip_ns(cell.tag) != "c":
                continue
            value_node = next((v for v in cell if _strip_ns(v.tag) == "v"), None)
            if value_node is None:
                continue
            value = value_node.text or ""
            if cell.get("t") == "s":
                value = strings[int(value)]
            cells.append(value)
        if cells:
            rows.append(cells)
    return rows


def convert(zip_bytes: bytes) -> str:
    """CSV text from the UCI zip (which nests the xlsx workbook)."""
    with zipfile.ZipFile(io.BytesIO(zip_bytes)) as outer:
        xlsx_names = [n for n in outer.namelist() if n.lower().endswith(".xlsx")]
        if not xlsx_names:
            raise SystemExit(f"no .xlsx member in the downloaded zip; found {outer.namelist()}")
        inner_bytes = outer.read(xlsx_names[0])
    with zipfile.ZipFile(io.BytesIO(inner_bytes)) as workbook:
        rows = read_worksheet(workbook)
    if not rows or rows[0] != ["AT", "V", "AP", "RH", "PE"]:
        raise SystemExit(f"unexpected worksheet layout; first row is {rows[0] if rows else 'missing'}")
    widths = {len(r) for r in rows}
    if widths != {5}:
        raise SystemExit(f"expected 5 columns in every row, found widths {sorted(widths)}")
    for row in rows[1:]:
        for cell in row:
            if not re.fullmatch(r"-?\d+(\.\d+)?([eE][+-]?\d+)?", cell):
                raise SystemExit(f"non-numeric cell {cell!r} in data rows")
    return "\n".join(",".join(row) for row in rows) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--url", default=CCPP_URL, help="source zip URL (default: UCI archive)")
    parser.add_argument("--out", default="data/ccpp.csv", help="output CSV path (default: data/ccpp.csv)")
    args = parser.parse_args(argv)

    print(f"downloading {args.url} ...", file=sys.stderr)
    with urllib.request.urlopen(args.url) as response:
        zip_bytes = response.read()
    csv_text = convert(zip_bytes)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(csv_text)
    n_rows = csv_text.count("\n") - 1
    print(f"wrote {out_path} ({n_rows} data rows)", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
