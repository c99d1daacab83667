"""Regenerate the vendored reference datasets and their manifests.

iris is written from scikit-learn's bundled copy of the classic Fisher
data. The wine and mobile files are deterministic synthetic stand-ins
(the original Kaggle/UCI downloads need network access): they match the
originals in shape, feature names, class structure and value precision,
and are produced from fixed seeds so the committed CSVs and their
SHA-256 manifests are stable.

Run from the repo root:  python3 tools/generate_datasets.py
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np
from sklearn.datasets import load_iris

OUT = Path(__file__).resolve().parent.parent / "src" / "cfshap" / "datasets"


def write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    lines = [",".join(header)]
    lines += [",".join(row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_manifest(name: str, csv_name: str, label_column: str, class_names: list[str]) -> None:
    digest = hashlib.sha256((OUT / csv_name).read_bytes()).hexdigest()
    manifest = {
        "name": name,
        "csv": csv_name,
        "label_column": label_column,
        "class_names": class_names,
        "sha256": digest,
    }
    (OUT / f"{name}.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def fmt(value: float, decimals: int) -> str:
    if decimals == 0:
        return str(int(round(value)))
    return f"{value:.{decimals}f}"


def gen_iris() -> None:
    bundle = load_iris()
    header = list(bundle.feature_names) + ["species"]
    names = [str(n) for n in bundle.target_names]
    rows = []
    for x, y in zip(bundle.data, bundle.target):
        rows.append([fmt(v, 1) for v in x] + [names[int(y)]])
    write_csv(OUT / "iris.csv", header, rows)
    write_manifest("iris", "iris.csv", "species", names)


def gen_wine() -> None:
    # Red-wine-quality-like table: 1599 rows, 11 physico-chemical
    # features, quality grades 3..8 with the original's class imbalance.
    rng = np.random.default_rng(20240711)
    counts = {3: 10, 4: 53, 5: 681, 6: 638, 7: 199, 8: 18}
    specs = [
        # name, base, per-grade slope, noise sd, low, high, decimals
        ("fixed acidity", 8.3, 0.15, 1.6, 4.6, 15.9, 1),
        ("volatile acidity", 0.53, -0.07, 0.14, 0.12, 1.58, 3),
        ("citric acid", 0.27, 0.04, 0.17, 0.0, 1.0, 2),
        ("residual sugar", 2.5, 0.05, 1.1, 0.9, 15.5, 1),
        ("chlorides", 0.087, -0.006, 0.03, 0.012, 0.611, 3),
        ("free sulfur dioxide", 15.9, -0.8, 9.0, 1.0, 72.0, 0),
        ("total sulfur dioxide", 46.0, -5.5, 28.0, 6.0, 289.0, 0),
        ("density", 0.9967, -0.0004, 0.0017, 0.990, 1.004, 5),
        ("pH", 3.31, 0.01, 0.15, 2.74, 4.01, 2),
        ("sulphates", 0.66, 0.05, 0.15, 0.33, 2.0, 2),
        ("alcohol", 10.4, 0.45, 0.9, 8.4, 14.9, 1),
    ]
    header = [s[0] for s in specs] + ["quality"]
    rows = []
    for grade, n in counts.items():
        offset = grade - 5.5
        for _ in range(n):
            row = []
            for _, base, slope, sd, lo, hi, dec in specs:
                v = base + slope * offset + rng.normal(0.0, sd)
                row.append(fmt(float(np.clip(v, lo, hi)), dec))
            row.append(str(grade))
            rows.append(row)
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    write_csv(OUT / "wine.csv", header, rows)
    write_manifest("wine", "wine.csv", "quality", [str(g) for g in counts])


def gen_mobile() -> None:
    # Phone-spec-like table: 2000 rows, 21 features, 4 balanced price
    # bands driven mostly by ram with battery/pixel contributions.
    rng = np.random.default_rng(20240712)
    n_per_class = 500
    header = [
        "battery_power", "blue", "clock_speed", "dual_sim", "fc", "four_g",
        "int_memory", "m_dep", "mobile_wt", "n_cores", "pc", "px_height",
        "px_width", "px_density", "ram", "sc_h", "sc_w", "talk_time",
        "three_g", "touch_screen", "wifi",
    ]
    rows = []
    for band in range(4):
        for _ in range(n_per_class):
            ram = rng.uniform(256 + band * 940, 1250 + band * 940)
            battery = rng.uniform(500, 1998) + band * 60
            px_h = rng.uniform(int(20 + 160 * band * 0.3), 1960)
            px_w = rng.uniform(500, 1998)
            values = {
                "battery_power": round(min(battery, 1998)),
                "blue": int(rng.random() < 0.5),
                "clock_speed": round(rng.uniform(0.5, 3.0), 1),
                "dual_sim": int(rng.random() < 0.5),
                "fc": round(rng.uniform(0, 19)),
                "four_g": int(rng.random() < 0.5),
                "int_memory": round(rng.uniform(2, 64)),
                "m_dep": round(rng.uniform(0.1, 1.0), 1),
                "mobile_wt": round(rng.uniform(80, 200)),
                "n_cores": int(rng.integers(1, 9)),
                "pc": round(rng.uniform(0, 20)),
                "px_height": round(px_h),
                "px_width": round(px_w),
                "px_density": round((px_h * px_w) ** 0.5 / rng.uniform(4.0, 7.0)),
                "ram": round(ram),
                "sc_h": round(rng.uniform(5, 19)),
                "sc_w": round(rng.uniform(0, 18)),
                "talk_time": round(rng.uniform(2, 20)),
                "three_g": int(rng.random() < 0.75),
                "touch_screen": int(rng.random() < 0.5),
                "wifi": int(rng.random() < 0.5),
            }
            rows.append([str(values[h]) for h in header] + [str(band)])
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    write_csv(OUT / "mobile.csv", header + ["price_range"], rows)
    write_manifest("mobile", "mobile.csv", "price_range", ["0", "1", "2", "3"])


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    gen_iris()
    gen_wine()
    gen_mobile()
    for name in ("iris", "wine", "mobile"):
        manifest = json.loads((OUT / f"{name}.json").read_text())
        print(f"{name}: sha256={manifest['sha256'][:12]}… classes={manifest['class_names']}")


if __name__ == "__main__":
    main()
