#!/usr/bin/env python3
# Copyright 2026 The fairweigh Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts the raw UCI Adult and ProPublica COMPAS files into headered CSVs.

The raw files are read from a directory laid out as

    <raw>/adult/adult.data
    <raw>/adult/adult.test
    <raw>/compas/compas-scores-two-years.csv

which is the layout shipped inside the `responsibly` wheel on PyPI:

    pip download --no-deps responsibly==0.1.2
    python3 -c "import zipfile; zipfile.ZipFile('responsibly-0.1.2-py3-none-any.whl').extractall('raw')"
    python3 tools/prepare_data.py raw/responsibly/dataset data

Adult: adult.data and adult.test are concatenated (48,842 rows), the test
file's trailing '.' on labels is removed and `fnlwgt` is dropped. Missing
values stay as '?' so the C++ loader drops and counts them.

COMPAS: rows are filtered the usual way (|days_b_screening_arrest| <= 30,
is_recid != -1, c_charge_degree != 'O', score_text != 'N/A') and race is
binarized to Caucasian / Non-Caucasian.
"""

import csv
import pathlib
import sys

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]

COMPAS_KEEP = [
    "sex", "age", "age_cat", "race", "juv_fel_count", "juv_misd_count",
    "juv_other_count", "priors_count", "c_charge_degree", "c_charge_desc",
    "two_year_recid",
]


def prepare_adult(raw: pathlib.Path, out: pathlib.Path) -> int:
    rows = []
    for name in ("adult.data", "adult.test"):
        with open(raw / "adult" / name, newline="") as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("|"):
                    continue
                fields = [v.strip() for v in line.split(",")]
                if len(fields) != len(ADULT_COLUMNS):
                    continue
                fields[-1] = fields[-1].rstrip(".")
                rows.append(fields)
    keep = [i for i, c in enumerate(ADULT_COLUMNS) if c != "fnlwgt"]
    with open(out / "adult.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([ADULT_COLUMNS[i] for i in keep])
        for r in rows:
            w.writerow([r[i] for i in keep])
    return len(rows)


def prepare_compas(raw: pathlib.Path, out: pathlib.Path) -> int:
    with open(raw / "compas" / "compas-scores-two-years.csv", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        # The raw header repeats a few names; the first occurrence wins.
        index = {}
        for i, name in enumerate(header):
            index.setdefault(name, i)
        kept = []
        for r in reader:
            get = lambda c: r[index[c]]
            days = get("days_b_screening_arrest")
            if days == "" or abs(int(float(days))) > 30:
                continue
            if get("is_recid") == "-1" or get("c_charge_degree") == "O":
                continue
            if get("score_text") == "N/A":
                continue
            row = [get(c) for c in COMPAS_KEEP]
            race = COMPAS_KEEP.index("race")
            row[race] = "Caucasian" if row[race] == "Caucasian" else "Non-Caucasian"
            kept.append(row)
    with open(out / "compas.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COMPAS_KEEP)
        w.writerows(kept)
    return len(kept)


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    raw, out = pathlib.Path(argv[1]), pathlib.Path(argv[2])
    out.mkdir(parents=True, exist_ok=True)
    print(f"adult: {prepare_adult(raw, out)} rows")
    print(f"compas: {prepare_compas(raw, out)} rows")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
