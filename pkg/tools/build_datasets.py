"""Rebuild the bundled categorical CSVs in src/dsmin/featsel/data.

Sources (both public):

* Mushroom: the UCI "agaricus-lepiota" table as shipped in one-hot form in
  the xgboost R package (``R-package/data/agaricus.{train,test}.rda``, e.g.
  from the npm tarball ``xgboost@1.1.0``).  Each row has exactly one active
  indicator per source attribute, so the categorical table is recovered
  exactly.  Label 1 is poisonous.
* Adult: the UCI ``adult.data`` training file (32561 rows), e.g. from the
  ``responsibly`` wheel (``responsibly/dataset/adult/adult.data``).
  Continuous columns are binned here so that the one-hot encoding has the
  usual 123 indicators.

Usage::

    python tools/build_datasets.py --agaricus DIR_WITH_RDA --adult adult.data

Reading the .rda files needs the ``rdata`` package (not a runtime dependency).
"""

import argparse
import csv
import gzip
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "dsmin" / "featsel" / "data"

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num", "marital-status",
    "occupation", "relationship", "race", "sex", "capital-gain", "capital-loss",
    "hours-per-week", "native-country",
]
# bin edges; each bin label is the interval it covers
ADULT_EDGES = {
    "age": [26, 33, 41, 50],
    "education-num": [8.5, 9.5, 10.5, 12.5],
    "hours-per-week": [24.5, 39.5, 40.5, 49.5],
    "capital-gain": [0.5],
    "capital-loss": [0.5],
}


def _rda_sparse(path):
    import rdata
    from rdata.parser import RObjectType as T

    def attrs(obj):
        out = {}
        a = obj.attributes
        while a is not None and a.info.type == T.LIST:
            out[a.tag.value.value.decode()] = a.value[0]
            a = a.value[1] if len(a.value) > 1 else None
        return out

    def conv(o):
        if o.info.type in (T.INT, T.REAL, T.LGL):
            return np.asarray(o.value)
        if o.info.type == T.STR:
            return [x.value.decode() if x.value is not None else None for x in o.value]
        if o.info.type == T.VEC:
            return [conv(x) for x in o.value]
        return o

    vec = rdata.parser.parse_file(path).object.value[0]
    d = dict(zip(conv(attrs(vec)["names"]), vec.value))
    A = attrs(d["data"])
    i, p, dim = conv(A["i"]), conv(A["p"]), conv(A["Dim"])
    names = conv(A["Dimnames"])[1]
    M = np.zeros(tuple(dim), dtype=np.int8)
    for c in range(dim[1]):
        M[i[p[c] : p[c + 1]], c] = 1
    return M, conv(d["label"]), names


def build_mushroom(rda_dir):
    blocks = [_rda_sparse(str(Path(rda_dir) / f"agaricus.{s}.rda")) for s in ("train", "test")]
    M = np.vstack([b[0] for b in blocks])
    y = np.concatenate([b[1] for b in blocks])
    names = blocks[0][2]
    attrs = []
    for nm in names:
        a = nm.split("=")[0]
        if a not in attrs:
            attrs.append(a)
    rows = []
    for r in range(M.shape[0]):
        vals = {}
        for c in np.flatnonzero(M[r]):
            a, v = names[c].split("=", 1)
            vals[a] = v
        rows.append(["poisonous" if y[r] == 1 else "edible"] + [vals[a] for a in attrs])
    _write("mushroom.csv.gz", ["class"] + attrs, rows)


def _bin(x, edges):
    k = int(np.searchsorted(edges, x, side="right"))
    lo = "-inf" if k == 0 else f"{edges[k - 1]:g}"
    hi = "inf" if k == len(edges) else f"{edges[k]:g}"
    return f"[{lo},{hi})"


def build_adult(path):
    rows = []
    with open(path) as fh:
        raw = [[c.strip() for c in line.split(",")] for line in fh if line.strip()]
    fnl = np.array([float(r[2]) for r in raw])
    edges = dict(ADULT_EDGES)
    edges["fnlwgt"] = list(np.quantile(fnl, [0.2, 0.4, 0.6, 0.8]))
    for r in raw:
        out = []
        for name, val in zip(ADULT_COLUMNS, r[:14]):
            out.append(_bin(float(val), edges[name]) if name in edges else val)
        rows.append([">50K" if r[14].startswith(">50K") else "<=50K"] + out)
    _write("adult.csv.gz", ["class"] + ADULT_COLUMNS, rows)


def _write(name, header, rows):
    OUT.mkdir(parents=True, exist_ok=True)
    with gzip.open(OUT / name, "wt", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {OUT / name}: {len(rows)} rows")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--agaricus", help="directory holding agaricus.{train,test}.rda")
    ap.add_argument("--adult", help="path to adult.data")
    args = ap.parse_args()
    if args.agaricus:
        build_mushroom(args.agaricus)
    if args.adult:
        build_adult(args.adult)


if __name__ == "__main__":
    main()
